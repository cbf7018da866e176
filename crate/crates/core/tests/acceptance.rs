//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines appear in `cargo test` output; exits nonzero when any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use poissonlab::harness::{self, Overrides, ReportRecord, RunOutcome};
use poissonlab::liealg::{bialgebra_residual, LieAlgebra, LieBialgebra};

const SEED: u64 = 20240611;

struct Verdict {
    ok: bool,
    detail: String,
}

fn suite_run(config: &str) -> Result<(RunOutcome, Duration), String> {
    let start = Instant::now();
    let out = harness::run_text(config, &Overrides { seed: Some(SEED), suite: None }).map_err(|e| e.to_string())?;
    Ok((out, start.elapsed()))
}

fn find<'a>(out: &'a RunOutcome, check: &str) -> Option<&'a ReportRecord> {
    out.records.iter().find(|r| r.check == check)
}

fn worst(records: &[&ReportRecord]) -> String {
    records
        .iter()
        .filter_map(|r| r.residual.map(|v| (v, r)))
        .max_by(|a, b| (a.0 / a.1.tolerance.max(f64::MIN_POSITIVE)).total_cmp(&(b.0 / b.1.tolerance.max(f64::MIN_POSITIVE))))
        .map(|(v, r)| format!("closest to tolerance: {} {:.2e} <= {:.0e}", r.check, v, r.tolerance))
        .unwrap_or_default()
}

/// Every record passes, the expected checks are present, and the budget holds.
fn all_pass(suite: &str, config: &str, expected: &[&str], budget: f64) -> Verdict {
    let (out, elapsed) = match suite_run(config) {
        Ok(v) => v,
        Err(e) => return Verdict { ok: false, detail: e },
    };
    let missing: Vec<&str> = expected.iter().copied().filter(|c| find(&out, c).is_none()).collect();
    let failed: Vec<String> = out
        .records
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}={:?}", r.check, r.residual))
        .collect();
    let in_suite = out.records.iter().all(|r| r.suite == suite);
    let secs = elapsed.as_secs_f64();
    let ok = missing.is_empty() && failed.is_empty() && in_suite && !out.records.is_empty() && secs < budget;
    let all: Vec<&ReportRecord> = out.records.iter().collect();
    let detail = if ok {
        format!("{} checks in {secs:.2} s, {}", out.records.len(), worst(&all))
    } else {
        format!("missing {missing:?}, failed {failed:?}, {secs:.2} s of {budget} s")
    };
    Verdict { ok, detail }
}

fn algebra_suite() -> Verdict {
    let config = r#"
        suites = ["lie-algebra"]
        [suite.lie-algebra]
        algebras = ["so3", "sl2", "h3", "abelian3", "broken"]
    "#;
    let (out, elapsed) = match suite_run(config) {
        Ok(v) => v,
        Err(e) => return Verdict { ok: false, detail: e },
    };
    let catalog_ok = ["so3", "sl2", "h3", "abelian3"].iter().all(|g| {
        let anti = find(&out, &format!("antisymmetry/{g}"));
        let jac = find(&out, &format!("jacobi/{g}"));
        matches!((anti, jac), (Some(a), Some(j))
            if a.residual == Some(0.0) && j.passed() && j.residual.is_some_and(|v| v < 1e-12))
    });
    let broken = find(&out, "jacobi/broken").and_then(|r| r.residual);
    let broken_ok = broken.is_some_and(|v| v >= 1.0 && (v - 1.0).abs() < 1e-12)
        && find(&out, "jacobi/broken").is_some_and(|r| !r.passed())
        && out.exit_code() == harness::exit::CHECK_FAILURE;
    let secs = elapsed.as_secs_f64();
    Verdict {
        ok: catalog_ok && broken_ok && secs < 1.0,
        detail: format!("catalog exact, broken residual {broken:?}, exit {}, {secs:.3} s", out.exit_code()),
    }
}

fn bialgebra_suite() -> Verdict {
    let v = all_pass(
        "bialgebra-double",
        "suites = [\"bialgebra-double\"]",
        &[
            "bialgebra/trivial(so3)",
            "bialgebra/coboundary(sl2)",
            "double-jacobi/coboundary(sl2)",
            "double-pairing/coboundary(sl2)",
        ],
        1.0,
    );
    let mismatch = LieBialgebra::new(LieAlgebra::so3(), LieAlgebra::so3()).map(|b| bialgebra_residual(&b));
    let mismatch_ok = matches!(mismatch, Ok(r) if r > 0.5);
    Verdict {
        ok: v.ok && mismatch_ok,
        detail: format!("{}; mismatched so3/so3 residual {mismatch:?}", v.detail),
    }
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/full.toml");
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let json = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_poissonlab"))
            .arg("run")
            .arg(&config)
            .arg("--json")
            .arg(&json)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        if status.code() != Some(0) {
            return Err(format!("exit {status}"));
        }
        std::fs::read(&json).map_err(|e| e.to_string())
    };
    match (run("a.jsonl"), run("b.jsonl")) {
        (Ok(a), Ok(b)) => Verdict {
            ok: a == b && !a.is_empty(),
            detail: format!("two CLI runs, {} bytes each, identical: {}", a.len(), a == b),
        },
        (a, b) => Verdict {
            ok: false,
            detail: format!("{:?} / {:?}", a.err(), b.err()),
        },
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("algebra suite", Box::new(algebra_suite)),
        (
            "lie-poisson suite",
            Box::new(|| {
                all_pass(
                    "eq5-lie-poisson",
                    "suites = [\"eq5-lie-poisson\"]",
                    &["bracket/so3", "bracket/sl2", "bracket/h3", "jacobi-points/so3"],
                    2.0,
                )
            }),
        ),
        (
            "cotangent-algebroid suite",
            Box::new(|| {
                all_pass(
                    "eq3-cotangent-algebroid",
                    "suites = [\"eq3-cotangent-algebroid\"]",
                    &[
                        "exact-forms/lie-poisson(so3)",
                        "exact-forms/symplectic(4)",
                        "anchor-morphism/lie-poisson(so3)",
                        "leibniz/symplectic(4)",
                    ],
                    5.0,
                )
            }),
        ),
        (
            "groupoid axiom suite",
            Box::new(|| {
                all_pass(
                    "groupoid-axioms",
                    "suites = [\"groupoid-axioms\"]",
                    &[
                        "axioms/pair(3)",
                        "axioms/action(so3, coadjoint)",
                        "axioms/action(h3, coadjoint)",
                        "axioms/cotangent-group(r2)",
                        "axioms/cotangent-group(h3)",
                        "axioms/cotangent-group(so3)",
                        "axioms/cotangent-group(sl2)",
                        "axioms/tangent-lift(cotangent-group(so3))",
                        "interchange/cotangent-group(so3)",
                    ],
                    10.0,
                )
            }),
        ),
        (
            "action-isomorphism suite",
            Box::new(|| {
                all_pass(
                    "action-isomorphism",
                    "suites = [\"action-isomorphism\"]",
                    &["morphism/so3", "round-trip/so3", "morphism/sl2", "round-trip/h3"],
                    2.0,
                )
            }),
        ),
        (
            "symplectic groupoid suite",
            Box::new(|| {
                let mut expected = Vec::new();
                for g in ["r3", "h3", "so3"] {
                    for c in ["graph-isotropy", "dimensions", "identity-isotropic", "inversion", "orthogonality", "omega-flat-morphism"] {
                        expected.push(format!("{c}/{g}"));
                    }
                }
                let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
                all_pass("eq10-lagrangian-graph", "suites = [\"eq10-lagrangian-graph\"]", &expected, 20.0)
            }),
        ),
        (
            "induced-base-poisson suite",
            Box::new(|| {
                all_pass(
                    "induced-base-poisson",
                    "suites = [\"induced-base-poisson\"]",
                    &["lie-poisson/so3", "skewness/h3", "beta-poisson-map/so3", "lie-poisson/r3"],
                    10.0,
                )
            }),
        ),
        (
            "tangent-lift suite",
            Box::new(|| {
                all_pass(
                    "tangent-lift",
                    "suites = [\"tangent-lift\"]",
                    &["courant/lie-poisson(so3)", "prop-2.7/so3"],
                    5.0,
                )
            }),
        ),
        (
            "generic-vs-closed-form oracle",
            Box::new(|| {
                all_pass(
                    "cotangent-lift-oracle",
                    "suites = [\"cotangent-lift-oracle\"]",
                    &["agreement/so3", "agreement/sl2", "agreement/h3", "agreement/r2", "well-definedness/so3"],
                    10.0,
                )
            }),
        ),
        ("bialgebra and double suite", Box::new(bialgebra_suite)),
        (
            "poisson-groupoid suite",
            Box::new(|| {
                all_pass(
                    "poisson-groupoid",
                    "suites = [\"poisson-groupoid\"]",
                    &["coisotropy/so3", "morphism/h3", "base-map/r3"],
                    10.0,
                )
            }),
        ),
        ("determinism", Box::new(determinism)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.ok {
            failures += 1;
        }
        println!("criterion {:>2} {} {name}: {}", i + 1, if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
