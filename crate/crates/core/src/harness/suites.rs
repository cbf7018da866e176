use std::sync::Arc;

use rand::RngCore;

use crate::groupoids::{
    act_iso_residual, axiom_residuals, build, interchange_residual, inverse_formula_residual,
    lemma_translation_residual, lift_oracle_residuals, well_definedness_residual, CotangentLift, GroupAsGroupoid,
    GroupoidSpec, SharedGroupoid,
};
use crate::liealg::{bialgebra_residual, drinfeld_double, pairing_invariance_residual, LieAlgebra, LieBialgebra, Multivector};
use crate::matgroups::{sample_ball, MatrixLieGroup};
use crate::numcore::{OneFormField, ScalarField, Vector};
use crate::poisson::{
    bracket_fn, cotangent_algebroid_residuals, courant_residuals, exact_forms_residual, jacobi_residual_pts,
    random_polynomial, tangent_lift, PoissonStructure,
};
use crate::symplectic::{
    basic_identity_residual, dimension_identities, graph_isotropy_residual, identity_lagrangian_residual,
    induced_base_poisson_residual, inversion_antisymplectic_residual, omega_flat_morphism_residual,
    orthogonality_residual, pg_coisotropy_suite, tangent_lift_poisson_map_residual, CotangentSetting,
};
use crate::{Error, Result};

/// Target lists a suite may be configured with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Algebras,
    Groups,
    Instances,
    Structures,
}

impl Field {
    pub fn key(self) -> &'static str {
        match self {
            Field::Algebras => "algebras",
            Field::Groups => "groups",
            Field::Instances => "instances",
            Field::Structures => "structures",
        }
    }
}

/// Poisson structure named in a config, e.g. `lie-poisson(so3)` or `symplectic(4)`.
#[derive(Clone, Debug)]
pub enum StructureSpec {
    LiePoisson(LieAlgebra),
    Symplectic(usize),
    Zero(usize),
}

impl StructureSpec {
    pub fn label(&self) -> String {
        match self {
            StructureSpec::LiePoisson(g) => format!("lie-poisson({})", g.name()),
            StructureSpec::Symplectic(n) => format!("symplectic({n})"),
            StructureSpec::Zero(n) => format!("zero({n})"),
        }
    }

    pub fn build(&self) -> PoissonStructure {
        match self {
            StructureSpec::LiePoisson(g) => PoissonStructure::lie_poisson(g),
            StructureSpec::Symplectic(n) => PoissonStructure::constant_symplectic(n / 2),
            StructureSpec::Zero(n) => PoissonStructure::zero(*n),
        }
    }
}

/// Canonical text of a groupoid spec.
pub fn spec_label(spec: &GroupoidSpec) -> String {
    match spec {
        GroupoidSpec::Pair(n) => format!("pair({n})"),
        GroupoidSpec::Action(g, kind) => format!("action({g}, {})", kind_name(*kind)),
        GroupoidSpec::CotangentGroup(g) => format!("cotangent-group({g})"),
        GroupoidSpec::Group(g) => format!("group({g})"),
        GroupoidSpec::TangentLift(inner) => format!("tangent-lift({})", spec_label(inner)),
        GroupoidSpec::CotangentLift(inner) => format!("cotangent-lift({})", spec_label(inner)),
    }
}

fn kind_name(kind: crate::groupoids::ActionKind) -> &'static str {
    match kind {
        crate::groupoids::ActionKind::Coadjoint => "coadjoint",
        crate::groupoids::ActionKind::Linear => "linear",
    }
}

fn is_lifted(spec: &GroupoidSpec) -> bool {
    matches!(spec, GroupoidSpec::TangentLift(_) | GroupoidSpec::CotangentLift(_))
}

/// Targets and sample count of one configured suite.
#[derive(Clone, Debug, Default)]
pub struct Targets {
    pub algebras: Vec<LieAlgebra>,
    pub groups: Vec<String>,
    pub instances: Vec<GroupoidSpec>,
    pub structures: Vec<StructureSpec>,
    pub samples: Option<usize>,
    pub fd_step: f64,
}

impl Targets {
    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

/// A named residual produced by a task.
#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub name: String,
    pub anchor: &'static str,
    pub tolerance: f64,
}

type TaskFn = Box<dyn Fn(&mut dyn RngCore) -> Result<Vec<f64>> + Send + Sync>;

/// Unit of parallel work: one seeded evaluation yielding one residual per check.
pub struct Task {
    pub checks: Vec<CheckSpec>,
    pub samples: usize,
    pub run: TaskFn,
}

impl Task {
    fn new(checks: Vec<CheckSpec>, samples: usize, run: impl Fn(&mut dyn RngCore) -> Result<Vec<f64>> + Send + Sync + 'static) -> Self {
        Self {
            checks,
            samples,
            run: Box::new(run),
        }
    }

    /// Seed key shared by the task's checks.
    pub fn key(&self) -> &str {
        &self.checks[0].name
    }
}

fn check(base: &str, target: &str, anchor: &'static str, tolerance: f64) -> CheckSpec {
    CheckSpec {
        name: format!("{base}/{target}"),
        anchor,
        tolerance,
    }
}

pub struct SuiteDef {
    pub name: &'static str,
    pub summary: &'static str,
    pub anchors: &'static [&'static str],
    pub fields: &'static [Field],
    pub default_algebras: &'static [&'static str],
    pub default_groups: &'static [&'static str],
    pub default_instances: &'static [&'static str],
    pub default_structures: &'static [&'static str],
    pub tasks: fn(&Targets) -> Vec<Task>,
}

const CATALOG_ALGEBRAS: &[&str] = &["abelian3", "h3", "sl2", "so3"];
const CATALOG_GROUPS: &[&str] = &["h3", "r2", "sl2", "so3"];
const THEOREM_GROUPS: &[&str] = &["r3", "h3", "so3"];
const NONE: &[&str] = &[];

pub static SUITES: &[SuiteDef] = &[
    SuiteDef {
        name: "lie-algebra",
        summary: "antisymmetry and Jacobi identity of structure constants",
        anchors: &["§1"],
        fields: &[Field::Algebras],
        default_algebras: CATALOG_ALGEBRAS,
        default_groups: NONE,
        default_instances: NONE,
        default_structures: NONE,
        tasks: lie_algebra,
    },
    SuiteDef {
        name: "eq5-lie-poisson",
        summary: "{l_X, l_Y} = l_[X,Y] on linear functions and Jacobi of the Lie-Poisson tensor",
        anchors: &["Eq. 5"],
        fields: &[Field::Algebras],
        default_algebras: CATALOG_ALGEBRAS,
        default_groups: NONE,
        default_instances: NONE,
        default_structures: NONE,
        tasks: lie_poisson,
    },
    SuiteDef {
        name: "eq3-cotangent-algebroid",
        summary: "[df, dg] = d{f, g}, anchor morphism and Leibniz rule of the 1-form bracket",
        anchors: &["Eq. 3"],
        fields: &[Field::Structures],
        default_algebras: NONE,
        default_groups: NONE,
        default_instances: NONE,
        default_structures: &["lie-poisson(so3)", "symplectic(4)"],
        tasks: cotangent_algebroid,
    },
    SuiteDef {
        name: "groupoid-axioms",
        summary: "groupoid axioms of concrete instances and tangent lifts, interchange law, translation lemma",
        anchors: &["§1", "Eq. 7", "Lemma 2.5"],
        fields: &[Field::Instances],
        default_algebras: NONE,
        default_groups: NONE,
        default_instances: &[
            "pair(3)",
            "action(so3, coadjoint)",
            "action(h3, coadjoint)",
            "cotangent-group(h3)",
            "cotangent-group(r2)",
            "cotangent-group(sl2)",
            "cotangent-group(so3)",
            "tangent-lift(pair(2))",
            "tangent-lift(cotangent-group(h3))",
            "tangent-lift(cotangent-group(so3))",
        ],
        default_structures: NONE,
        tasks: groupoid_axioms,
    },
    SuiteDef {
        name: "action-isomorphism",
        summary: "coadjoint action groupoid is isomorphic to the cotangent group",
        anchors: &["§2"],
        fields: &[Field::Groups],
        default_algebras: NONE,
        default_groups: CATALOG_GROUPS,
        default_instances: NONE,
        default_structures: NONE,
        tasks: action_isomorphism,
    },
    SuiteDef {
        name: "eq10-lagrangian-graph",
        summary: "T*G is a symplectic groupoid: Lagrangian graph, dimensions, identity section, inversion",
        anchors: &["Eq. 10", "Theorem 2.2", "§2", "Eq. 11", "Prop. 2.6", "Eq. wd"],
        fields: &[Field::Groups],
        default_algebras: NONE,
        default_groups: THEOREM_GROUPS,
        default_instances: NONE,
        default_structures: NONE,
        tasks: lagrangian_graph,
    },
    SuiteDef {
        name: "induced-base-poisson",
        summary: "Poisson structure induced on the base by a∘r⁻¹ and the target as a Poisson map",
        anchors: &["Theorem 2.2(iii)/(iv)", "Eq. basic"],
        fields: &[Field::Groups],
        default_algebras: NONE,
        default_groups: THEOREM_GROUPS,
        default_instances: NONE,
        default_structures: NONE,
        tasks: induced_base,
    },
    SuiteDef {
        name: "tangent-lift",
        summary: "tangent lift Poisson structure and -w as a Poisson map from it",
        anchors: &["Eq. 22", "Prop. 2.7"],
        fields: &[Field::Structures, Field::Groups],
        default_algebras: NONE,
        default_groups: &["so3"],
        default_instances: NONE,
        default_structures: &["lie-poisson(so3)"],
        tasks: tangent_lift_suite,
    },
    SuiteDef {
        name: "cotangent-lift-oracle",
        summary: "generic cotangent lift of a group against the closed-form cotangent group",
        anchors: &["Eq. 6", "Eq. wd", "Eq. inverses"],
        fields: &[Field::Groups],
        default_algebras: NONE,
        default_groups: CATALOG_GROUPS,
        default_instances: NONE,
        default_structures: NONE,
        tasks: lift_oracle,
    },
    SuiteDef {
        name: "bialgebra-double",
        summary: "bialgebra compatibility and the Drinfel'd double",
        anchors: &["Eq. 19", "§5"],
        fields: &[Field::Algebras],
        default_algebras: CATALOG_ALGEBRAS,
        default_groups: NONE,
        default_instances: NONE,
        default_structures: NONE,
        tasks: bialgebra_double,
    },
    SuiteDef {
        name: "poisson-groupoid",
        summary: "T*G as a Poisson groupoid: coisotropic graph, morphism and base map",
        anchors: &["Definition 4.1", "Eq. 17", "Eq. 18"],
        fields: &[Field::Groups],
        default_algebras: NONE,
        default_groups: THEOREM_GROUPS,
        default_instances: NONE,
        default_structures: NONE,
        tasks: poisson_groupoid,
    },
];

pub fn suite(name: &str) -> Option<&'static SuiteDef> {
    SUITES.iter().find(|s| s.name == name)
}

fn group(name: &str) -> Result<Arc<MatrixLieGroup>> {
    MatrixLieGroup::by_name(name).map(Arc::new)
}

fn setting(name: &str) -> Result<CotangentSetting> {
    CotangentSetting::new(group(name)?)
}

fn points(rng: &mut dyn RngCore, n: usize, count: usize) -> Vec<Vector> {
    (0..count).map(|_| sample_ball(rng, n, 1.0)).collect()
}

fn lie_algebra(t: &Targets) -> Vec<Task> {
    t.algebras
        .iter()
        .map(|g| {
            let name = g.name().to_string();
            let g = g.clone();
            Task::new(
                vec![check("antisymmetry", &name, "§1", 0.0), check("jacobi", &name, "§1", 1e-12)],
                0,
                move |_| Ok(vec![g.antisymmetry_defect(), g.jacobi_residual()]),
            )
        })
        .collect()
}

fn lie_poisson(t: &Targets) -> Vec<Task> {
    let count = t.count(100);
    t.algebras
        .iter()
        .map(|g| {
            let name = g.name().to_string();
            let g = g.clone();
            Task::new(
                vec![
                    check("bracket", &name, "Eq. 5", 1e-8),
                    check("jacobi-points", &name, "Eq. 5", 1e-7),
                ],
                count,
                move |rng| {
                    let n = g.dim();
                    let pi = PoissonStructure::lie_poisson(&g);
                    let coords: Vec<ScalarField> =
                        (0..n).map(|i| ScalarField::coordinate(pi.chart().clone(), i)).collect();
                    let pts = points(rng, n, count);
                    let mut bracket: f64 = 0.0;
                    for x in &pts {
                        for i in 0..n {
                            for j in (i + 1)..n {
                                let lhs = bracket_fn(&pi, &coords[i], &coords[j], x.as_slice())?;
                                let rhs: f64 = (0..n).map(|k| g.constant(k, i, j) * x[k]).sum();
                                bracket = bracket.max((lhs - rhs).abs());
                            }
                        }
                    }
                    Ok(vec![bracket, jacobi_residual_pts(&pi, &pts)?])
                },
            )
        })
        .collect()
}

fn cotangent_algebroid(t: &Targets) -> Vec<Task> {
    let count = t.count(50);
    let step = t.fd_step;
    t.structures
        .iter()
        .map(|s| {
            let label = s.label();
            let s = s.clone();
            Task::new(
                vec![
                    check("exact-forms", &label, "Eq. 3", 1e-6),
                    check("anchor-morphism", &label, "Eq. 3", 1e-6),
                    check("leibniz", &label, "Eq. 3", 1e-6),
                ],
                count,
                move |rng| {
                    let pi = s.build();
                    let (c, n) = (pi.chart().clone(), pi.dim());
                    let mut poly = |d| ScalarField::smooth(c.clone(), random_polynomial(rng, n, d));
                    let (a, b, f, w) = (poly(3), poly(2), poly(2), poly(1));
                    let phi = OneFormField::exact(&a).scale(&w);
                    let psi = OneFormField::exact(&b);
                    let pts = points(rng, n, count);
                    let exact = exact_forms_residual(&pi, &a, &b, &pts, step)?;
                    let r = cotangent_algebroid_residuals(&pi, &phi, &psi, &f, &pts, step)?;
                    Ok(vec![exact, r.anchor_morphism, r.leibniz])
                },
            )
        })
        .collect()
}

fn groupoid_axioms(t: &Targets) -> Vec<Task> {
    let count = t.count(100);
    let mut tasks = Vec::new();
    for spec in &t.instances {
        let label = spec_label(spec);
        let tol = if is_lifted(spec) { 1e-6 } else { 1e-8 };
        let s = spec.clone();
        tasks.push(Task::new(vec![check("axioms", &label, "§1", tol)], count, move |rng| {
            let grp = build(&s)?;
            Ok(vec![axiom_residuals(grp.as_ref(), rng, count)?.max()])
        }));
        match spec {
            GroupoidSpec::TangentLift(parent) => {
                let parent = (**parent).clone();
                tasks.push(Task::new(
                    vec![check("interchange", &spec_label(&parent), "Eq. 7", 1e-6)],
                    count,
                    move |rng| Ok(vec![interchange_residual(&build(&parent)?, rng, count)?]),
                ));
            }
            GroupoidSpec::CotangentLift(_) => {}
            _ => {
                let s = spec.clone();
                tasks.push(Task::new(vec![check("translation", &label, "Lemma 2.5", 1e-6)], count, move |rng| {
                    Ok(vec![lemma_translation_residual(build(&s)?.as_ref(), rng, count)?])
                }));
            }
        }
    }
    tasks
}

fn action_isomorphism(t: &Targets) -> Vec<Task> {
    let count = t.count(100);
    t.groups
        .iter()
        .map(|name| {
            let g = name.clone();
            Task::new(
                vec![check("morphism", name, "§2", 1e-9), check("round-trip", name, "§2", 1e-9)],
                count,
                move |rng| {
                    let r = act_iso_residual(group(&g)?, rng, count)?;
                    let morphism = [r.source, r.target, r.identity, r.product, r.inverse]
                        .into_iter()
                        .fold(0.0, f64::max);
                    Ok(vec![morphism, r.round_trip])
                },
            )
        })
        .collect()
}

fn per_group(
    t: &Targets,
    base: &'static str,
    anchor: &'static str,
    tolerance: f64,
    count: usize,
    f: fn(&CotangentSetting, &mut dyn RngCore, usize) -> Result<f64>,
) -> Vec<Task> {
    t.groups
        .iter()
        .map(|name| {
            let g = name.clone();
            Task::new(vec![check(base, name, anchor, tolerance)], count, move |rng| {
                Ok(vec![f(&setting(&g)?, rng, count)?])
            })
        })
        .collect()
}

fn dimension_defect(s: &CotangentSetting, rng: &mut dyn RngCore, _: usize) -> Result<f64> {
    let d = dimension_identities(s, rng)?;
    let gap = |a: usize, b: usize| a.abs_diff(b) as f64;
    Ok(gap(2 * d.base, d.sigma) + gap(d.graph, 2 * d.sigma - d.base) + gap(d.graph_measured, d.graph) + gap(2 * d.graph, 3 * d.sigma))
}

fn lagrangian_graph(t: &Targets) -> Vec<Task> {
    let (count, flat) = (t.count(100), t.count(50));
    let mut tasks = per_group(t, "graph-isotropy", "Eq. 10", 1e-5, count, |s, rng, n| {
        Ok(graph_isotropy_residual(s, rng, n)?.residual)
    });
    tasks.extend(per_group(t, "dimensions", "Theorem 2.2", 0.0, 1, dimension_defect));
    tasks.extend(per_group(t, "identity-isotropic", "§2", 1e-6, count, identity_lagrangian_residual));
    tasks.extend(per_group(t, "inversion", "Eq. 11", 1e-5, count, inversion_antisymplectic_residual));
    tasks.extend(per_group(t, "orthogonality", "Prop. 2.6", 1e-5, count, orthogonality_residual));
    tasks.extend(per_group(t, "omega-flat-morphism", "Eq. wd", 1e-5, flat, |s, rng, n| {
        Ok(omega_flat_morphism_residual(s, rng, n)?.max())
    }));
    tasks
}

fn induced_base(t: &Targets) -> Vec<Task> {
    let count = t.count(50);
    let mut tasks: Vec<Task> = t
        .groups
        .iter()
        .map(|name| {
            let g = name.clone();
            let anchor = "Theorem 2.2(iii)/(iv)";
            Task::new(
                vec![
                    check("lie-poisson", name, anchor, 1e-5),
                    check("skewness", name, anchor, 1e-6),
                    check("beta-poisson-map", name, anchor, 1e-5),
                ],
                count,
                move |rng| {
                    let r = induced_base_poisson_residual(&setting(&g)?, rng, count)?;
                    Ok(vec![r.lie_poisson, r.skewness, r.beta_poisson_map])
                },
            )
        })
        .collect();
    tasks.extend(per_group(t, "basic-identity", "Eq. basic", 1e-5, count, basic_identity_residual));
    tasks
}

fn tangent_lift_suite(t: &Targets) -> Vec<Task> {
    let (count, prop) = (t.count(100), t.count(30));
    let mut tasks: Vec<Task> = t
        .structures
        .iter()
        .map(|s| {
            let s = s.clone();
            Task::new(vec![check("courant", &s.label(), "Eq. 22", 1e-6)], count, move |rng| {
                let pi = s.build();
                let lift = tangent_lift(&pi);
                let (c, n) = (pi.chart().clone(), pi.dim());
                let pts = points(rng, 2 * n, count);
                let mut worst: f64 = 0.0;
                for _ in 0..3 {
                    let f1 = ScalarField::smooth(c.clone(), random_polynomial(rng, n, 3));
                    let f2 = ScalarField::smooth(c.clone(), random_polynomial(rng, n, 2));
                    worst = worst.max(courant_residuals(&pi, &lift, &f1, &f2, &pts)?.max());
                }
                Ok(vec![worst])
            })
        })
        .collect();
    tasks.extend(per_group(t, "prop-2.7", "Prop. 2.7", 1e-4, prop, tangent_lift_poisson_map_residual));
    tasks
}

fn lift_oracle(t: &Targets) -> Vec<Task> {
    let count = t.count(100);
    let mut tasks = Vec::new();
    for name in &t.groups {
        let g = name.clone();
        tasks.push(Task::new(vec![check("agreement", name, "Eq. 6", 1e-6)], count, move |rng| {
            Ok(vec![lift_oracle_residuals(group(&g)?, rng, count)?.max()])
        }));
        let g = name.clone();
        tasks.push(Task::new(vec![check("well-definedness", name, "Eq. wd", 1e-7)], count, move |rng| {
            let parent: SharedGroupoid = Arc::new(GroupAsGroupoid::new(group(&g)?));
            Ok(vec![well_definedness_residual(&CotangentLift::new(parent)?, rng, count)?])
        }));
        let g = name.clone();
        tasks.push(Task::new(vec![check("inverse-formula", name, "Eq. inverses", 1e-7)], count, move |rng| {
            let parent: SharedGroupoid = Arc::new(GroupAsGroupoid::new(group(&g)?));
            Ok(vec![inverse_formula_residual(&parent, rng, count)?])
        }));
    }
    tasks
}

fn double_task(label: String, make: impl Fn() -> Result<LieBialgebra> + Send + Sync + 'static) -> Task {
    Task::new(
        vec![
            check("bialgebra", &label, "Eq. 19", 1e-12),
            check("double-jacobi", &label, "§5", 1e-12),
            check("double-pairing", &label, "§5", 1e-12),
        ],
        0,
        move |_| {
            let b = make()?;
            let double = drinfeld_double(&b)?;
            Ok(vec![bialgebra_residual(&b), double.jacobi_residual(), pairing_invariance_residual(&double)])
        },
    )
}

fn bialgebra_double(t: &Targets) -> Vec<Task> {
    let mut tasks = Vec::new();
    for g in &t.algebras {
        let g = g.clone();
        tasks.push(double_task(format!("trivial({})", g.name()), move || LieBialgebra::trivial(g.clone())));
    }
    if t.algebras.iter().any(|g| g.name() == "sl2") {
        // r = e ∧ f in the basis (h, e, f)
        tasks.push(double_task("coboundary(sl2)".to_string(), || {
            LieBialgebra::coboundary(LieAlgebra::sl2(), &Multivector::basis_blade(3, &[1, 2])?)
        }));
    }
    tasks
}

fn poisson_groupoid(t: &Targets) -> Vec<Task> {
    let count = t.count(50);
    t.groups
        .iter()
        .map(|name| {
            let g = name.clone();
            Task::new(
                vec![
                    check("coisotropy", name, "Definition 4.1", 1e-5),
                    check("morphism", name, "Eq. 17", 1e-5),
                    check("base-map", name, "Eq. 18", 1e-5),
                ],
                count,
                move |rng| {
                    let r = pg_coisotropy_suite(&setting(&g)?, rng, count)?;
                    Ok(vec![r.coisotropy, r.morphism, r.identity])
                },
            )
        })
        .collect()
}

/// Structure names accepted in `structures` lists.
pub fn parse_structure(s: &str, algebra: &dyn Fn(&str) -> Result<LieAlgebra>) -> Result<StructureSpec> {
    let s = s.trim();
    let bad = || Error::Config(format!("structure `{s}`: expected lie-poisson(ALG), symplectic(2n) or zero(n)"));
    let (kind, rest) = s.split_once('(').ok_or_else(bad)?;
    let inner = rest.strip_suffix(')').ok_or_else(bad)?.trim();
    let dim = || inner.parse::<usize>().ok().filter(|n| *n >= 1);
    match kind.trim() {
        "lie-poisson" => Ok(StructureSpec::LiePoisson(algebra(inner)?)),
        "symplectic" => dim().filter(|n| n % 2 == 0).map(StructureSpec::Symplectic).ok_or_else(bad),
        "zero" => dim().map(StructureSpec::Zero).ok_or_else(bad),
        _ => Err(bad()),
    }
}
