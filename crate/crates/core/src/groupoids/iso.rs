use std::sync::Arc;

use rand::RngCore;

use super::{multiply, sample_composable_with, Action, ActionKind, CotangentGroup, Groupoid};
use crate::matgroups::MatrixLieGroup;
use crate::numcore::Vector;
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ActionIsoResiduals {
    pub source: f64,
    pub target: f64,
    pub identity: f64,
    pub product: f64,
    pub inverse: f64,
    pub round_trip: f64,
}

impl ActionIsoResiduals {
    pub fn max(&self) -> f64 {
        [self.source, self.target, self.identity, self.product, self.inverse, self.round_trip]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `G ⋉ 𝔤* → T*G`, `(g, θ) ↦ (g, θ ∘ Ad_{g⁻¹})` in right-trivialized coordinates,
/// and its inverse `(g, μ) ↦ (g, μ ∘ Ad_g)`.
fn forward(group: &MatrixLieGroup, a: &[f64]) -> Result<Vector> {
    let n = group.dim();
    let g = group.exp(&Vector::from_column_slice(&a[..n]));
    let mu = group.coadjoint(&g, &Vector::from_column_slice(&a[n..]))?;
    Ok(Vector::from_iterator(2 * n, a[..n].iter().copied().chain(mu.iter().copied())))
}

fn backward(group: &MatrixLieGroup, a: &[f64]) -> Result<Vector> {
    let n = group.dim();
    let g = group.exp(&Vector::from_column_slice(&a[..n]));
    let theta = group.ad_matrix(&g)?.transpose() * Vector::from_column_slice(&a[n..]);
    Ok(Vector::from_iterator(2 * n, a[..n].iter().copied().chain(theta.iter().copied())))
}

/// Morphism and invertibility residuals of the action isomorphism over `count`
/// sampled composable pairs.
pub fn act_iso_residual(group: Arc<MatrixLieGroup>, rng: &mut dyn RngCore, count: usize) -> Result<ActionIsoResiduals> {
    let action = Action::new(group.clone(), ActionKind::Coadjoint);
    let cot = CotangentGroup::new(group.clone());
    let mut r = ActionIsoResiduals::default();
    let d = |a: &Vector, b: &Vector| (a - b).amax();
    for _ in 0..count {
        let a = action.sample_arrow(rng);
        let b = sample_composable_with(&action, a.as_slice(), rng)?;
        let fa = forward(&group, a.as_slice())?;
        let fb = forward(&group, b.as_slice())?;
        r.source = r.source.max(d(&cot.source(fa.as_slice())?, &action.source(a.as_slice())?));
        r.target = r.target.max(d(&cot.target(fa.as_slice())?, &action.target(a.as_slice())?));

        let theta = action.source(a.as_slice())?;
        let fid = forward(&group, action.identity(theta.as_slice())?.as_slice())?;
        r.identity = r.identity.max(d(&fid, &cot.identity(theta.as_slice())?));

        let prod = forward(&group, multiply(&action, b.as_slice(), a.as_slice())?.as_slice())?;
        r.product = r.product.max(d(&prod, &multiply(&cot, fb.as_slice(), fa.as_slice())?));

        let finv = forward(&group, action.inverse(a.as_slice())?.as_slice())?;
        r.inverse = r.inverse.max(d(&finv, &cot.inverse(fa.as_slice())?));

        r.round_trip = r.round_trip.max(d(&backward(&group, fa.as_slice())?, &a));
    }
    Ok(r)
}
