use std::path::Path;
use std::process::{Command, Output};

use poissonlab::harness::{exit, parse_jsonl};

fn poissonlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poissonlab")).args(args).output().expect("spawn poissonlab")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn list_names_the_catalog() {
    let out = poissonlab(&["list"]);
    assert_eq!(out.status.code(), Some(exit::PASS));
    let text = stdout(&out);
    for name in ["so3", "sl2", "h3", "eq10-lagrangian-graph", "tangent-lift"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn describe_known_and_unknown_names() {
    let out = poissonlab(&["describe", "groupoid-axioms"]);
    assert_eq!(out.status.code(), Some(exit::PASS));
    assert!(stdout(&out).contains("axioms"));
    let out = poissonlab(&["describe", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(exit::CONFIG_ERROR));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn passing_run_writes_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "seed = 5\nsuites = [\"lie-algebra\", \"eq5-lie-poisson\"]\n");
    let json = dir.path().join("out.jsonl");
    let out = poissonlab(&["run", &config, "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::PASS), "{}", stdout(&out));
    let records = parse_jsonl(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(records.len(), 16);
    assert!(records.iter().all(|r| r.passed() && r.seed == 5));
    assert!(stdout(&out).contains("16 checks, 16 passed, 0 failed"));
}

#[test]
fn seed_and_suite_flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "seed = 5\nsuites = [\"lie-algebra\", \"eq5-lie-poisson\"]\n");
    let json = dir.path().join("out.jsonl");
    let out = poissonlab(&["run", &config, "--seed", "77", "--suite", "eq5-lie-poisson", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::PASS));
    let records = parse_jsonl(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r.suite == "eq5-lie-poisson" && r.seed == 77));
}

#[test]
fn failing_residual_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "suites = [\"lie-algebra\"]\n[suite.lie-algebra]\nalgebras = [\"so3\", \"broken\"]\n",
    );
    let out = poissonlab(&["run", &config]);
    assert_eq!(out.status.code(), Some(exit::CHECK_FAILURE));
    assert!(stdout(&out).contains("jacobi/broken"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["suites = [\"nope\"]\n", "seed = \"x\"\n", "unknown_key = 1\n"] {
        let config = write_config(dir.path(), text);
        let out = poissonlab(&["run", &config]);
        assert_eq!(out.status.code(), Some(exit::CONFIG_ERROR), "{text}");
    }
    let out = poissonlab(&["run", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::CONFIG_ERROR));
    let out = poissonlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(exit::CONFIG_ERROR));
}
