//! Lie groupoids in a global arrow chart, their tangent and cotangent lifts,
//! and the Lie algebroid of a groupoid.
//!
//! An arrow `g` goes from `α(g)` to `β(g)`; `hg` is defined when `α(h) = β(g)`.
//! Every instance also provides a smooth extension `compose` of the partial
//! multiplication and a retraction `with_source(h, m)` onto the arrows with
//! source `m`, which is how composable data and curves are produced.

mod algebroid;
mod cotangent;
mod instances;
mod iso;
mod spec;
mod tangent;

use std::sync::Arc;

use rand::RngCore;

pub use algebroid::{algebroid_extract, Algebroid, AlgebroidAt};
pub use cotangent::{
    chart_covector, inverse_formula_residual, lift_oracle_residuals, well_definedness_residual,
    CotangentLift, OracleResiduals,
};
pub use instances::{Action, ActionKind, CotangentGroup, GroupAsGroupoid, Pair};
pub use iso::{act_iso_residual, ActionIsoResiduals};
pub use spec::{build, parse_spec, GroupoidSpec};
pub use tangent::{
    interchange_residual, lemma_translation_residual, tangent_compose, tangent_identity,
    tangent_inverse, tangent_source, tangent_target, tangent_with_source, TangentLift,
};

use crate::numcore::Vector;
use crate::tolerances::{COMPOSABLE_EXACT, FD_STEP};
use crate::{Error, Result};

pub trait Groupoid: Send + Sync {
    fn name(&self) -> String;
    fn arrow_dim(&self) -> usize;
    fn base_dim(&self) -> usize;

    /// `α`
    fn source(&self, g: &[f64]) -> Result<Vector>;
    /// `β`
    fn target(&self, g: &[f64]) -> Result<Vector>;
    fn identity(&self, m: &[f64]) -> Result<Vector>;
    fn inverse(&self, g: &[f64]) -> Result<Vector>;
    /// Smooth extension of `(h, g) ↦ hg` off the composable set.
    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector>;
    /// Arrow near `h` with source `m`; returns `h` itself when `α(h) = m`.
    fn with_source(&self, h: &[f64], m: &[f64]) -> Result<Vector>;
    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector;

    fn composable_tolerance(&self) -> f64 {
        COMPOSABLE_EXACT
    }

    /// Central-difference step used when differentiating this instance's maps.
    fn diff_step(&self) -> f64 {
        FD_STEP
    }
}

pub type SharedGroupoid = Arc<dyn Groupoid>;

/// `‖α(h) − β(g)‖∞`.
pub fn composability_defect(grp: &dyn Groupoid, h: &[f64], g: &[f64]) -> Result<f64> {
    Ok((grp.source(h)? - grp.target(g)?).amax())
}

/// Checked multiplication `hg`.
pub fn multiply(grp: &dyn Groupoid, h: &[f64], g: &[f64]) -> Result<Vector> {
    let residual = composability_defect(grp, h, g)?;
    let tolerance = grp.composable_tolerance();
    if !(residual <= tolerance) {
        return Err(Error::NotComposable { residual, tolerance });
    }
    grp.compose(h, g)
}

/// An arrow whose source is `β(g)`, so that `(h, g)` is composable.
pub fn sample_composable_with(grp: &dyn Groupoid, g: &[f64], rng: &mut dyn RngCore) -> Result<Vector> {
    let free = grp.sample_arrow(rng);
    let h = grp.with_source(free.as_slice(), grp.target(g)?.as_slice())?;
    let defect = composability_defect(grp, h.as_slice(), g)?;
    if !(defect <= grp.composable_tolerance()) {
        return Err(Error::Sampler(format!(
            "{}: retraction left a composability defect {defect:e}",
            grp.name()
        )));
    }
    Ok(h)
}

/// Composable triple `(h, g, f)`.
pub fn sample_triple(grp: &dyn Groupoid, rng: &mut dyn RngCore) -> Result<[Vector; 3]> {
    let f = grp.sample_arrow(rng);
    let g = sample_composable_with(grp, f.as_slice(), rng)?;
    let h = sample_composable_with(grp, g.as_slice(), rng)?;
    Ok([h, g, f])
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AxiomResiduals {
    pub associativity: f64,
    pub left_identity: f64,
    pub right_identity: f64,
    pub left_inverse: f64,
    pub right_inverse: f64,
    pub target_of_product: f64,
    pub source_of_product: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        [
            self.associativity,
            self.left_identity,
            self.right_identity,
            self.left_inverse,
            self.right_inverse,
            self.target_of_product,
            self.source_of_product,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("associativity", self.associativity),
            ("left-identity", self.left_identity),
            ("right-identity", self.right_identity),
            ("left-inverse", self.left_inverse),
            ("right-inverse", self.right_inverse),
            ("target-of-product", self.target_of_product),
            ("source-of-product", self.source_of_product),
        ]
    }
}

fn diff(a: &Vector, b: &Vector) -> f64 {
    (a - b).amax()
}

/// Groupoid axioms over `count` sampled composable triples.
pub fn axiom_residuals(grp: &dyn Groupoid, rng: &mut dyn RngCore, count: usize) -> Result<AxiomResiduals> {
    let mut r = AxiomResiduals::default();
    for _ in 0..count {
        let [h, g, f] = sample_triple(grp, rng)?;
        let (h, g, f) = (h.as_slice(), g.as_slice(), f.as_slice());
        let gf = multiply(grp, g, f)?;
        let hg = multiply(grp, h, g)?;
        let left = multiply(grp, h, gf.as_slice())?;
        let right = multiply(grp, hg.as_slice(), f)?;
        r.associativity = r.associativity.max(diff(&left, &right));

        let gv = Vector::from_column_slice(g);
        let id_target = grp.identity(grp.target(g)?.as_slice())?;
        let id_source = grp.identity(grp.source(g)?.as_slice())?;
        r.left_identity = r.left_identity.max(diff(&multiply(grp, id_target.as_slice(), g)?, &gv));
        r.right_identity = r.right_identity.max(diff(&multiply(grp, g, id_source.as_slice())?, &gv));

        let inv = grp.inverse(g)?;
        r.left_inverse = r.left_inverse.max(diff(&multiply(grp, inv.as_slice(), g)?, &id_source));
        r.right_inverse = r.right_inverse.max(diff(&multiply(grp, g, inv.as_slice())?, &id_target));

        r.target_of_product = r.target_of_product.max(diff(&grp.target(hg.as_slice())?, &grp.target(h)?));
        r.source_of_product = r.source_of_product.max(diff(&grp.source(hg.as_slice())?, &grp.source(g)?));
    }
    Ok(r)
}
