use std::sync::Arc;

use rand::{Rng, RngCore};

use super::Groupoid;
use crate::matgroups::{sample_ball, MatrixLieGroup};
use crate::numcore::{self, Matrix, Vector};
use crate::tolerances::ARROW_SAMPLE_RADIUS;
use crate::{Error, Result};

fn uniform(rng: &mut dyn RngCore, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

fn check_len(got: usize, expected: usize) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn concat(a: &[f64], b: &[f64]) -> Vector {
    Vector::from_iterator(a.len() + b.len(), a.iter().chain(b).copied())
}

/// Pair groupoid `M × M ⇒ M` on `ℝⁿ`; the arrow `(p, m)` goes from `m` to `p`.
#[derive(Clone, Debug)]
pub struct Pair {
    n: usize,
}

impl Pair {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self { n }
    }
}

impl Groupoid for Pair {
    fn name(&self) -> String {
        format!("pair({})", self.n)
    }

    fn arrow_dim(&self) -> usize {
        2 * self.n
    }

    fn base_dim(&self) -> usize {
        self.n
    }

    fn source(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), 2 * self.n)?;
        Ok(Vector::from_column_slice(&g[self.n..]))
    }

    fn target(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), 2 * self.n)?;
        Ok(Vector::from_column_slice(&g[..self.n]))
    }

    fn identity(&self, m: &[f64]) -> Result<Vector> {
        check_len(m.len(), self.n)?;
        Ok(concat(m, m))
    }

    fn inverse(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), 2 * self.n)?;
        Ok(concat(&g[self.n..], &g[..self.n]))
    }

    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector> {
        check_len(h.len(), 2 * self.n)?;
        check_len(g.len(), 2 * self.n)?;
        Ok(concat(&h[..self.n], &g[self.n..]))
    }

    fn with_source(&self, h: &[f64], m: &[f64]) -> Result<Vector> {
        check_len(m.len(), self.n)?;
        Ok(concat(&h[..self.n], m))
    }

    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector {
        uniform(rng, 2 * self.n)
    }
}

/// Group-element part of an arrow chart `(x, …)` with `g = exp(Σ x_i E_i)`.
fn group_part(group: &MatrixLieGroup, x: &[f64]) -> Matrix {
    group.exp(&Vector::from_column_slice(x))
}

fn log_product(group: &MatrixLieGroup, a: &[f64], b: &[f64]) -> Result<Vector> {
    group.log(&(group_part(group, a) * group_part(group, b)))
}

fn log_inverse(group: &MatrixLieGroup, a: &[f64]) -> Result<Vector> {
    group.log(&numcore::inverse(&group_part(group, a))?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    /// `g·θ = θ ∘ Ad_{g⁻¹}` on `𝔤*`.
    Coadjoint,
    /// Matrix multiplication on `ℝ^m`.
    Linear,
}

/// Action groupoid `G ⋉ M`: the arrow `(x, m)` goes from `m` to `g·m`.
#[derive(Clone, Debug)]
pub struct Action {
    group: Arc<MatrixLieGroup>,
    kind: ActionKind,
}

impl Action {
    pub fn new(group: Arc<MatrixLieGroup>, kind: ActionKind) -> Self {
        Self { group, kind }
    }

    pub fn group(&self) -> &Arc<MatrixLieGroup> {
        &self.group
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    /// `g·m`.
    pub fn act(&self, g: &Matrix, m: &[f64]) -> Result<Vector> {
        let m = Vector::from_column_slice(m);
        match self.kind {
            ActionKind::Coadjoint => self.group.coadjoint(g, &m),
            ActionKind::Linear => Ok(g * m),
        }
    }

    fn n(&self) -> usize {
        self.group.dim()
    }
}

impl Groupoid for Action {
    fn name(&self) -> String {
        let kind = match self.kind {
            ActionKind::Coadjoint => "coadjoint",
            ActionKind::Linear => "linear",
        };
        format!("action({}, {kind})", self.group.name())
    }

    fn arrow_dim(&self) -> usize {
        self.n() + self.base_dim()
    }

    fn base_dim(&self) -> usize {
        match self.kind {
            ActionKind::Coadjoint => self.n(),
            ActionKind::Linear => self.group.size(),
        }
    }

    fn source(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), self.arrow_dim())?;
        Ok(Vector::from_column_slice(&g[self.n()..]))
    }

    fn target(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), self.arrow_dim())?;
        let n = self.n();
        self.act(&group_part(&self.group, &g[..n]), &g[n..])
    }

    fn identity(&self, m: &[f64]) -> Result<Vector> {
        check_len(m.len(), self.base_dim())?;
        Ok(concat(&vec![0.0; self.n()], m))
    }

    fn inverse(&self, g: &[f64]) -> Result<Vector> {
        let n = self.n();
        let target = self.target(g)?;
        Ok(concat(log_inverse(&self.group, &g[..n])?.as_slice(), target.as_slice()))
    }

    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector> {
        check_len(h.len(), self.arrow_dim())?;
        check_len(g.len(), self.arrow_dim())?;
        let n = self.n();
        Ok(concat(log_product(&self.group, &h[..n], &g[..n])?.as_slice(), &g[n..]))
    }

    fn with_source(&self, h: &[f64], m: &[f64]) -> Result<Vector> {
        check_len(m.len(), self.base_dim())?;
        Ok(concat(&h[..self.n()], m))
    }

    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector {
        let x = sample_ball(rng, self.n(), ARROW_SAMPLE_RADIUS);
        let m = uniform(rng, self.base_dim());
        concat(x.as_slice(), m.as_slice())
    }
}

/// `T*G ⇒ 𝔤*` in right-trivialized coordinates `(x, μ)`:
/// `β̃ = μ`, `α̃ = μ ∘ Ad_g`, `(h, ν)(g, μ) = (hg, ν)`, `(g, μ)⁻¹ = (g⁻¹, μ ∘ Ad_g)`.
#[derive(Clone, Debug)]
pub struct CotangentGroup {
    group: Arc<MatrixLieGroup>,
}

impl CotangentGroup {
    pub fn new(group: Arc<MatrixLieGroup>) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &Arc<MatrixLieGroup> {
        &self.group
    }

    fn n(&self) -> usize {
        self.group.dim()
    }

    /// `μ ∘ Ad_g`.
    fn pull(&self, x: &[f64], mu: &[f64]) -> Result<Vector> {
        let ad = self.group.ad_matrix(&group_part(&self.group, x))?;
        Ok(ad.transpose() * Vector::from_column_slice(mu))
    }
}

impl Groupoid for CotangentGroup {
    fn name(&self) -> String {
        format!("cotangent-group({})", self.group.name())
    }

    fn arrow_dim(&self) -> usize {
        2 * self.n()
    }

    fn base_dim(&self) -> usize {
        self.n()
    }

    fn source(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), self.arrow_dim())?;
        let n = self.n();
        self.pull(&g[..n], &g[n..])
    }

    fn target(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), self.arrow_dim())?;
        Ok(Vector::from_column_slice(&g[self.n()..]))
    }

    fn identity(&self, m: &[f64]) -> Result<Vector> {
        check_len(m.len(), self.n())?;
        Ok(concat(&vec![0.0; self.n()], m))
    }

    fn inverse(&self, g: &[f64]) -> Result<Vector> {
        let n = self.n();
        let source = self.source(g)?;
        Ok(concat(log_inverse(&self.group, &g[..n])?.as_slice(), source.as_slice()))
    }

    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector> {
        check_len(h.len(), self.arrow_dim())?;
        check_len(g.len(), self.arrow_dim())?;
        let n = self.n();
        Ok(concat(log_product(&self.group, &h[..n], &g[..n])?.as_slice(), &h[n..]))
    }

    fn with_source(&self, h: &[f64], m: &[f64]) -> Result<Vector> {
        check_len(m.len(), self.n())?;
        let n = self.n();
        // ν with ν ∘ Ad_h = m
        let ad = self.group.ad_matrix(&group_part(&self.group, &h[..n]))?;
        let nu = numcore::solve(&ad.transpose(), &Vector::from_column_slice(m))?;
        Ok(concat(&h[..n], nu.as_slice()))
    }

    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector {
        let x = sample_ball(rng, self.n(), ARROW_SAMPLE_RADIUS);
        let mu = uniform(rng, self.n());
        concat(x.as_slice(), mu.as_slice())
    }
}

/// A Lie group as a groupoid over a point.
#[derive(Clone, Debug)]
pub struct GroupAsGroupoid {
    group: Arc<MatrixLieGroup>,
}

impl GroupAsGroupoid {
    pub fn new(group: Arc<MatrixLieGroup>) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &Arc<MatrixLieGroup> {
        &self.group
    }
}

impl Groupoid for GroupAsGroupoid {
    fn name(&self) -> String {
        format!("group({})", self.group.name())
    }

    fn arrow_dim(&self) -> usize {
        self.group.dim()
    }

    fn base_dim(&self) -> usize {
        0
    }

    fn source(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), self.arrow_dim())?;
        Ok(Vector::zeros(0))
    }

    fn target(&self, g: &[f64]) -> Result<Vector> {
        check_len(g.len(), self.arrow_dim())?;
        Ok(Vector::zeros(0))
    }

    fn identity(&self, m: &[f64]) -> Result<Vector> {
        check_len(m.len(), 0)?;
        Ok(Vector::zeros(self.arrow_dim()))
    }

    fn inverse(&self, g: &[f64]) -> Result<Vector> {
        log_inverse(&self.group, g)
    }

    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector> {
        log_product(&self.group, h, g)
    }

    fn with_source(&self, h: &[f64], _m: &[f64]) -> Result<Vector> {
        Ok(Vector::from_column_slice(h))
    }

    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector {
        sample_ball(rng, self.arrow_dim(), ARROW_SAMPLE_RADIUS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoids::axiom_residuals;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arc(g: MatrixLieGroup) -> Arc<MatrixLieGroup> {
        Arc::new(g)
    }

    #[test]
    fn pair_axioms_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = axiom_residuals(&Pair::new(3), &mut rng, 100).unwrap();
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn exact_instances_pass_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let instances: Vec<Box<dyn Groupoid>> = vec![
            Box::new(CotangentGroup::new(arc(MatrixLieGroup::heisenberg()))),
            Box::new(CotangentGroup::new(arc(MatrixLieGroup::so3()))),
            Box::new(CotangentGroup::new(arc(MatrixLieGroup::sl2()))),
            Box::new(Action::new(arc(MatrixLieGroup::so3()), ActionKind::Coadjoint)),
            Box::new(Action::new(arc(MatrixLieGroup::sl2()), ActionKind::Linear)),
            Box::new(GroupAsGroupoid::new(arc(MatrixLieGroup::so3()))),
            Box::new(GroupAsGroupoid::new(arc(MatrixLieGroup::translations(2)))),
        ];
        for g in &instances {
            let r = axiom_residuals(g.as_ref(), &mut rng, 100).unwrap();
            assert!(r.max() < 1e-10, "{} {r:?}", g.name());
        }
    }

    #[test]
    fn abelian_cotangent_product() {
        let g = CotangentGroup::new(arc(MatrixLieGroup::translations(2)));
        let h = [1.0, 2.0, 0.5, -0.5];
        let k = [0.25, -1.0, 0.5, -0.5];
        let p = crate::groupoids::multiply(&g, &h, &k).unwrap();
        assert_eq!(p, Vector::from_column_slice(&[1.25, 1.0, 0.5, -0.5]));
    }

    #[test]
    fn cotangent_group_rejects_noncomposable() {
        let g = CotangentGroup::new(arc(MatrixLieGroup::so3()));
        let h = [0.1, 0.0, 0.0, 1.0, 0.0, 0.0];
        let k = [0.0, 0.1, 0.0, 0.0, 1.0, 0.0];
        assert!(matches!(
            crate::groupoids::multiply(&g, &h, &k),
            Err(Error::NotComposable { .. })
        ));
    }

    #[test]
    fn with_source_is_a_retraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = CotangentGroup::new(arc(MatrixLieGroup::sl2()));
        let h = g.sample_arrow(&mut rng);
        let m = g.source(h.as_slice()).unwrap();
        assert!((g.with_source(h.as_slice(), m.as_slice()).unwrap() - &h).amax() < 1e-12);
        let m2 = Vector::from_column_slice(&[0.3, -0.1, 0.7]);
        let moved = g.with_source(h.as_slice(), m2.as_slice()).unwrap();
        assert!((g.source(moved.as_slice()).unwrap() - m2).amax() < 1e-12);
    }
}
