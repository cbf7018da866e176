//! Configuration-driven suites of residual checks and their reports.
//!
//! A run resolves the configuration against the catalog, expands every enabled
//! suite into seeded tasks, evaluates them in parallel and returns the records
//! sorted by suite and check name. Each task draws from its own generator,
//! seeded from the run seed and the task's first check name, so the report does
//! not depend on scheduling.

mod config;
mod report;
mod suites;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{Config, SuiteSettings};
pub use report::{parse_jsonl, sort_records, summary_table, to_jsonl, ReportRecord, Verdict};
pub use suites::{parse_structure, spec_label, suite, Field, StructureSpec, SuiteDef, Targets, Task, SUITES};

use crate::groupoids::{parse_spec, GroupoidSpec};
use crate::liealg::LieAlgebra;
use crate::matgroups::MatrixLieGroup;
use crate::tolerances::FD_STEP;
use crate::{Error, Result};

/// Process exit codes of `poissonlab run`.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILURE: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
}

/// Command-line overrides applied on top of a configuration.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub suite: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub records: Vec<ReportRecord>,
}

impl RunOutcome {
    /// `0` when every record passes, `2` when some check could not be
    /// constructed or evaluated, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.records.iter().any(|r| r.error.is_some()) {
            exit::CONFIG_ERROR
        } else if self.records.iter().all(ReportRecord::passed) {
            exit::PASS
        } else {
            exit::CHECK_FAILURE
        }
    }

    pub fn jsonl(&self) -> String {
        to_jsonl(&self.records)
    }

    pub fn table(&self) -> String {
        summary_table(&self.records)
    }
}

/// One enabled suite with resolved targets and tolerance overrides.
pub struct SuitePlan {
    pub def: &'static SuiteDef,
    pub tasks: Vec<Task>,
    pub tolerances: BTreeMap<String, f64>,
}

impl SuitePlan {
    fn tolerance(&self, check: &suites::CheckSpec) -> f64 {
        let base = check.name.split('/').next().unwrap_or(&check.name);
        self.tolerances
            .get(&check.name)
            .or_else(|| self.tolerances.get(base))
            .copied()
            .unwrap_or(check.tolerance)
    }
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

struct Resolver {
    custom: BTreeMap<String, LieAlgebra>,
}

impl Resolver {
    fn new(config: &Config) -> Result<Self> {
        let mut custom = BTreeMap::new();
        for def in &config.algebras {
            if LieAlgebra::by_name(&def.name).is_ok() {
                return Err(config_error(format!("algebra `{}` shadows a catalog algebra", def.name)));
            }
            let g = def.build().map_err(|e| config_error(format!("algebra `{}`: {e}", def.name)))?;
            if custom.insert(def.name.clone(), g).is_some() {
                return Err(config_error(format!("algebra `{}` declared twice", def.name)));
            }
        }
        Ok(Self { custom })
    }

    fn algebra(&self, name: &str) -> Result<LieAlgebra> {
        match self.custom.get(name) {
            Some(g) => Ok(g.clone()),
            None => LieAlgebra::by_name(name).map_err(|_| config_error(format!("undeclared algebra `{name}`"))),
        }
    }

    fn group(&self, name: &str) -> Result<String> {
        MatrixLieGroup::by_name(name)
            .map(|_| name.to_string())
            .map_err(|_| config_error(format!("unknown group `{name}`")))
    }

    fn instance(&self, text: &str) -> Result<GroupoidSpec> {
        let spec = parse_spec(text).map_err(|e| config_error(format!("instance `{text}`: {e}")))?;
        self.check_groups(&spec)?;
        Ok(spec)
    }

    fn check_groups(&self, spec: &GroupoidSpec) -> Result<()> {
        match spec {
            GroupoidSpec::Pair(_) => Ok(()),
            GroupoidSpec::Action(g, _) | GroupoidSpec::CotangentGroup(g) | GroupoidSpec::Group(g) => {
                self.group(g).map(|_| ())
            }
            GroupoidSpec::TangentLift(inner) | GroupoidSpec::CotangentLift(inner) => self.check_groups(inner),
        }
    }
}

fn names<'a>(configured: &'a Option<Vec<String>>, defaults: &'a [&'a str]) -> Vec<String> {
    match configured {
        Some(list) => list.clone(),
        None => defaults.iter().map(|s| s.to_string()).collect(),
    }
}

fn resolve_suite(def: &'static SuiteDef, settings: &SuiteSettings, config: &Config, resolver: &Resolver) -> Result<SuitePlan> {
    let given = [
        (Field::Algebras, settings.algebras.is_some()),
        (Field::Groups, settings.groups.is_some()),
        (Field::Instances, settings.instances.is_some()),
        (Field::Structures, settings.structures.is_some()),
    ];
    for (field, present) in given {
        if present && !def.fields.contains(&field) {
            return Err(config_error(format!("suite `{}` does not take `{}`", def.name, field.key())));
        }
    }
    let fd_step = settings.fd_step.or(config.fd_step).unwrap_or(FD_STEP);
    if !(fd_step.is_finite() && fd_step > 0.0) {
        return Err(config_error(format!("suite `{}`: fd_step must be positive", def.name)));
    }
    if settings.samples == Some(0) {
        return Err(config_error(format!("suite `{}`: samples must be positive", def.name)));
    }
    let targets = Targets {
        algebras: names(&settings.algebras, def.default_algebras)
            .iter()
            .map(|n| resolver.algebra(n))
            .collect::<Result<_>>()?,
        groups: names(&settings.groups, def.default_groups)
            .iter()
            .map(|n| resolver.group(n))
            .collect::<Result<_>>()?,
        instances: names(&settings.instances, def.default_instances)
            .iter()
            .map(|n| resolver.instance(n))
            .collect::<Result<_>>()?,
        structures: names(&settings.structures, def.default_structures)
            .iter()
            .map(|n| parse_structure(n, &|a| resolver.algebra(a)))
            .collect::<Result<_>>()?,
        samples: settings.samples,
        fd_step,
    };
    let tasks = (def.tasks)(&targets);
    let mut seen = BTreeSet::new();
    for t in &tasks {
        for c in &t.checks {
            if !seen.insert(c.name.clone()) {
                return Err(config_error(format!("suite `{}`: duplicate check `{}`", def.name, c.name)));
            }
        }
    }
    for (key, value) in &settings.tolerances {
        if !(value.is_finite() && *value > 0.0) {
            return Err(config_error(format!("suite `{}`: tolerance `{key}` must be positive", def.name)));
        }
        let known = seen.iter().any(|name| name == key || name.split('/').next() == Some(key.as_str()));
        if !known {
            return Err(config_error(format!("suite `{}` has no check `{key}`", def.name)));
        }
    }
    Ok(SuitePlan {
        def,
        tasks,
        tolerances: settings.tolerances.clone(),
    })
}

/// Resolves a configuration into suite plans, rejecting undeclared names.
pub fn plan(config: &Config, overrides: &Overrides) -> Result<Vec<SuitePlan>> {
    let resolver = Resolver::new(config)?;
    for name in config.settings.keys() {
        if suite(name).is_none() {
            return Err(config_error(format!("settings for unknown suite `{name}`")));
        }
    }
    let enabled: Vec<String> = match (&overrides.suite, &config.suites) {
        (Some(one), _) => vec![one.clone()],
        (None, Some(list)) => list.clone(),
        (None, None) => SUITES.iter().map(|s| s.name.to_string()).collect(),
    };
    let mut unique = BTreeSet::new();
    let mut plans = Vec::new();
    for name in &enabled {
        let def = suite(name).ok_or_else(|| config_error(format!("unknown suite `{name}`")))?;
        if !unique.insert(name.clone()) {
            return Err(config_error(format!("suite `{name}` listed twice")));
        }
        let settings = config.settings.get(name).cloned().unwrap_or_default();
        plans.push(resolve_suite(def, &settings, config, &resolver)?);
    }
    Ok(plans)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

fn evaluate(plan: &SuitePlan, task: &Task, seed: u64) -> Vec<ReportRecord> {
    let suite = plan.def.name;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(&format!("{suite}/{}", task.key())));
    match (task.run)(&mut rng) {
        Ok(values) => task
            .checks
            .iter()
            .zip(values)
            .map(|(c, v)| ReportRecord::evaluated(suite, &c.name, c.anchor, v, plan.tolerance(c), task.samples, seed))
            .collect(),
        Err(e) => task
            .checks
            .iter()
            .map(|c| ReportRecord::failed(suite, &c.name, c.anchor, plan.tolerance(c), task.samples, seed, e.to_string()))
            .collect(),
    }
}

/// Runs every enabled suite; `Err` only for configuration errors.
pub fn run(config: &Config, overrides: &Overrides) -> Result<RunOutcome> {
    let plans = plan(config, overrides)?;
    let seed = overrides.seed.unwrap_or(config.seed);
    let jobs: Vec<(&SuitePlan, &Task)> = plans.iter().flat_map(|p| p.tasks.iter().map(move |t| (p, t))).collect();
    let mut records: Vec<ReportRecord> = jobs
        .par_iter()
        .flat_map_iter(|(p, t)| evaluate(p, t, seed))
        .collect();
    sort_records(&mut records);
    Ok(RunOutcome { records })
}

pub fn run_text(text: &str, overrides: &Overrides) -> Result<RunOutcome> {
    run(&Config::parse(text)?, overrides)
}

const STRUCTURES: &[(&str, &str)] = &[
    ("lie-poisson(ALG)", "linear Poisson structure on the dual of a Lie algebra"),
    ("symplectic(2n)", "canonical constant structure on R^2n"),
    ("zero(n)", "zero bivector on R^n"),
];

const INSTANCES: &[(&str, &str)] = &[
    ("pair(n)", "pair groupoid R^n x R^n over R^n"),
    ("action(G, coadjoint|linear)", "action groupoid of G on its coalgebra or defining space"),
    ("cotangent-group(G)", "T*G over the coalgebra, closed form"),
    ("group(G)", "G as a groupoid over a point"),
    ("tangent-lift(I)", "tangent groupoid of an instance"),
    ("cotangent-lift(I)", "cotangent groupoid of an instance over the dual algebroid"),
];

fn group_line(name: &str) -> String {
    match MatrixLieGroup::by_name(name) {
        Ok(g) => format!("{name}: dimension {}, {}x{} matrices", g.dim(), g.size(), g.size()),
        Err(_) => name.to_string(),
    }
}

fn algebra_line(name: &str) -> String {
    match LieAlgebra::by_name(name) {
        Ok(g) => format!("{name}: dimension {}, Jacobi residual {:.1e}", g.dim(), g.jacobi_residual()),
        Err(_) => name.to_string(),
    }
}

/// Groups, algebras, structures, instance kinds and suites in a fixed order.
pub fn list_catalog() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "groups:");
    for name in MatrixLieGroup::catalog_names() {
        let _ = writeln!(out, "  {}", group_line(name));
    }
    let _ = writeln!(out, "  r<n>: translations of R^n, 1 <= n <= 8");
    let _ = writeln!(out, "algebras:");
    for name in LieAlgebra::catalog_names() {
        let _ = writeln!(out, "  {}", algebra_line(name));
    }
    let _ = writeln!(out, "  abelian<n>: abelian algebra of dimension n");
    let _ = writeln!(out, "  broken: antisymmetric constants violating Jacobi");
    let _ = writeln!(out, "structures:");
    for (name, what) in STRUCTURES {
        let _ = writeln!(out, "  {name}: {what}");
    }
    let _ = writeln!(out, "instances:");
    for (name, what) in INSTANCES {
        let _ = writeln!(out, "  {name}: {what}");
    }
    let _ = writeln!(out, "suites:");
    for s in SUITES {
        let _ = writeln!(out, "  {} [{}]: {}", s.name, s.anchors.join(", "), s.summary);
    }
    out
}

fn describe_suite(def: &'static SuiteDef) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {}", def.name);
    let _ = writeln!(out, "  {}", def.summary);
    let _ = writeln!(out, "  anchors: {}", def.anchors.join(", "));
    for field in def.fields {
        let defaults = match field {
            Field::Algebras => def.default_algebras,
            Field::Groups => def.default_groups,
            Field::Instances => def.default_instances,
            Field::Structures => def.default_structures,
        };
        let _ = writeln!(out, "  {} (default): {}", field.key(), defaults.join("; "));
    }
    let settings = SuiteSettings::default();
    if let Ok(plan) = resolve_suite(def, &settings, &Config::default(), &Resolver { custom: BTreeMap::new() }) {
        let _ = writeln!(out, "  checks:");
        for t in &plan.tasks {
            for c in &t.checks {
                let _ = writeln!(
                    out,
                    "    {} [{}] tolerance {:e}, {} samples",
                    c.name, c.anchor, c.tolerance, t.samples
                );
            }
        }
    }
    out
}

/// Description of a suite, group, algebra, structure or instance kind.
pub fn describe(name: &str) -> Result<String> {
    if let Some(def) = suite(name) {
        return Ok(describe_suite(def));
    }
    if let Ok(g) = MatrixLieGroup::by_name(name) {
        let mut out = format!("group {name}\n  {}\n", group_line(name));
        let _ = writeln!(out, "  algebra: {}", algebra_line(g.algebra().name()));
        return Ok(out);
    }
    if let Ok(g) = LieAlgebra::by_name(name) {
        let mut out = format!("algebra {name}\n  {}\n", algebra_line(name));
        for i in 0..g.dim() {
            for j in (i + 1)..g.dim() {
                let terms: Vec<String> = (0..g.dim())
                    .filter(|&k| g.constant(k, i, j) != 0.0)
                    .map(|k| format!("{} e{}", g.constant(k, i, j), k + 1))
                    .collect();
                if !terms.is_empty() {
                    let _ = writeln!(out, "  [e{}, e{}] = {}", i + 1, j + 1, terms.join(" + "));
                }
            }
        }
        return Ok(out);
    }
    let kind = name.split('(').next().unwrap_or(name);
    for (label, what) in STRUCTURES.iter().chain(INSTANCES) {
        if label.split('(').next() == Some(kind) {
            return Ok(format!("{label}\n  {what}\n"));
        }
    }
    Err(Error::Unknown {
        kind: "catalog entry",
        name: name.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(text: &str) -> RunOutcome {
        run_text(text, &Overrides::default()).unwrap()
    }

    #[test]
    fn empty_suite_list_is_a_pass() {
        let out = run_ok("suites = []");
        assert!(out.records.is_empty());
        assert_eq!(out.exit_code(), exit::PASS);
    }

    #[test]
    fn algebra_suite_passes_on_catalog() {
        let out = run_ok("seed = 1\nsuites = [\"lie-algebra\"]");
        assert_eq!(out.records.len(), 8);
        assert!(out.records.iter().all(|r| r.passed()), "{}", out.table());
        assert_eq!(out.exit_code(), exit::PASS);
    }

    #[test]
    fn injected_broken_algebra_fails() {
        let text = r#"
            suites = ["lie-algebra"]
            [suite.lie-algebra]
            algebras = ["so3", "broken"]
        "#;
        let out = run_ok(text);
        let jac = out.records.iter().find(|r| r.check == "jacobi/broken").unwrap();
        assert!(jac.residual.unwrap() >= 1.0);
        assert_eq!(jac.verdict, Verdict::Fail);
        assert_eq!(out.exit_code(), exit::CHECK_FAILURE);
    }

    #[test]
    fn custom_algebra_declarations() {
        let text = r#"
            suites = ["lie-algebra"]
            [[algebra]]
            name = "twisted"
            dim = 3
            constants = [[1, 2, 3, 1.0], [2, 3, 1, 1.0], [3, 1, 1, 1.0]]
            [suite.lie-algebra]
            algebras = ["twisted"]
            tolerances = { jacobi = 0.5 }
        "#;
        let out = run_ok(text);
        let jac = out.records.iter().find(|r| r.check == "jacobi/twisted").unwrap();
        assert_eq!(jac.tolerance, 0.5);
        assert!(!jac.passed());
    }

    #[test]
    fn config_errors() {
        let cases = [
            "suites = [\"nope\"]",
            "suits = []",
            "suites = [\"lie-algebra\"]\n[suite.lie-algebra]\nalgebras = [\"gl7\"]",
            "suites = [\"lie-algebra\"]\n[suite.lie-algebra]\ngroups = [\"so3\"]",
            "suites = [\"lie-algebra\"]\n[suite.lie-algebra]\ntolerances = { nothing = 1.0 }",
            "suites = [\"lie-algebra\"]\n[suite.lie-algebra]\ntolerances = { jacobi = -1.0 }",
            "suites = [\"groupoid-axioms\"]\n[suite.groupoid-axioms]\ninstances = [\"cotangent-group(gl9)\"]",
            "suites = [\"eq3-cotangent-algebroid\"]\n[suite.eq3-cotangent-algebroid]\nstructures = [\"symplectic(3)\"]",
            "[suite.unknown]\nsamples = 3",
            "suites = [\"lie-algebra\", \"lie-algebra\"]",
            "seed = \"x\"",
        ];
        for text in cases {
            assert!(matches!(run_text(text, &Overrides::default()), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn construction_failure_is_a_failed_record() {
        let text = r#"
            suites = ["bialgebra-double"]
            [suite.bialgebra-double]
            algebras = ["so3", "broken"]
        "#;
        let out = run_ok(text);
        let broken: Vec<_> = out.records.iter().filter(|r| r.check.ends_with("trivial(broken)")).collect();
        assert_eq!(broken.len(), 3);
        assert!(broken.iter().all(|r| r.residual.is_none() && !r.passed()));
        assert!(broken[0].error.as_deref().is_some_and(|e| e.contains("broken")));
        assert!(out.records.iter().filter(|r| r.check.ends_with("trivial(so3)")).all(|r| r.passed()));
        assert_eq!(out.exit_code(), exit::CONFIG_ERROR);
    }

    #[test]
    fn error_records_exit_two() {
        let mut records = vec![ReportRecord::evaluated("s", "a/x", "§1", 2.0, 1.0, 1, 0)];
        assert_eq!(RunOutcome { records: records.clone() }.exit_code(), exit::CHECK_FAILURE);
        records.push(ReportRecord::failed("s", "b/x", "§1", 1.0, 1, 0, "singular matrix".into()));
        assert_eq!(RunOutcome { records: records.clone() }.exit_code(), exit::CONFIG_ERROR);
        let nan = ReportRecord::evaluated("s", "c/x", "§1", f64::NAN, 1.0, 1, 0);
        assert!(nan.residual.is_none() && nan.error.is_some());
        assert_eq!(RunOutcome { records: vec![nan] }.exit_code(), exit::CONFIG_ERROR);
    }

    #[test]
    fn overrides_select_suite_and_seed() {
        let o = Overrides {
            seed: Some(9),
            suite: Some("eq5-lie-poisson".into()),
        };
        let text = "suites = []\n[suite.eq5-lie-poisson]\nalgebras = [\"so3\"]\nsamples = 5";
        let out = run_text(text, &o).unwrap();
        assert_eq!(out.records.len(), 2);
        assert!(out.records.iter().all(|r| r.seed == 9 && r.samples == 5 && r.passed()));
    }

    #[test]
    fn reports_are_reproducible() {
        let text = "seed = 4\nsuites = [\"eq5-lie-poisson\", \"lie-algebra\"]\n[suite.eq5-lie-poisson]\nsamples = 10";
        assert_eq!(run_ok(text).jsonl(), run_ok(text).jsonl());
    }

    #[test]
    fn catalog_listing() {
        let text = list_catalog();
        assert!(text.contains("so3"));
        assert!(text.contains("eq10-lagrangian-graph"));
        assert_eq!(text, list_catalog());
        for s in SUITES {
            assert!(describe(s.name).unwrap().contains(s.name));
        }
        assert!(describe("abelian3").unwrap().contains("algebra abelian3"));
        assert!(describe("r3").unwrap().starts_with("group r3"));
        assert!(describe("pair").is_ok());
        assert!(describe("nothing").is_err());
    }
}
