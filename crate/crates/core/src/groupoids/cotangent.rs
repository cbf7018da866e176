use std::sync::Arc;

use rand::{Rng, RngCore};

use super::algebroid::{Algebroid, AlgebroidAt};
use super::tangent::{jac, tangent_compose, tangent_identity, tangent_inverse};
use super::{multiply, sample_composable_with, CotangentGroup, GroupAsGroupoid, Groupoid, SharedGroupoid};
use crate::matgroups::MatrixLieGroup;
use crate::numcore::{null_space, solve, Matrix, Vector};
use crate::tolerances::{COMPOSABLE_LIFTED, FD_STEP_NESTED};
use crate::{Error, Result};

/// Cotangent groupoid `T*𝒢 ⇒ A*𝒢`. Arrows are `(g, Φ)` with `Φ` a covector in
/// the arrow chart; base points are `(m, φ)` with `φ_k = ⟨φ, b_k(m)⟩` in the
/// algebroid frame.
#[derive(Clone)]
pub struct CotangentLift {
    parent: SharedGroupoid,
    alg: Algebroid,
}

fn join(a: &[f64], b: &[f64]) -> Vector {
    Vector::from_iterator(a.len() + b.len(), a.iter().chain(b).copied())
}

impl CotangentLift {
    pub fn new(parent: SharedGroupoid) -> Result<Self> {
        let alg = Algebroid::new(parent.clone())?;
        Ok(Self { parent, alg })
    }

    pub fn parent(&self) -> &SharedGroupoid {
        &self.parent
    }

    pub fn algebroid(&self) -> &Algebroid {
        &self.alg
    }

    fn n(&self) -> usize {
        self.parent.arrow_dim()
    }

    fn m(&self) -> usize {
        self.parent.base_dim()
    }

    fn r(&self) -> usize {
        self.alg.rank()
    }

    fn check(&self, x: &[f64], expected: usize) -> Result<()> {
        if x.len() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                got: x.len(),
            })
        }
    }

    /// Columns `T(R_g)(b_k(βg)) = b_k • 0̃_g`.
    pub fn right_translates(&self, g: &[f64]) -> Result<Matrix> {
        let grp = self.parent.as_ref();
        let data = self.alg.at(grp.target(g)?.as_slice())?;
        let zero = vec![0.0; self.n()];
        let mut out = Matrix::zeros(self.n(), self.r());
        for k in 0..self.r() {
            let b = data.frame.column(k).into_owned();
            let (_, v) = tangent_compose(grp, data.identity_arrow.as_slice(), b.as_slice(), g, &zero)?;
            out.set_column(k, &v);
        }
        Ok(out)
    }

    /// Columns `T(L_g)(b_k − T1(a b_k)) = 0̃_g • (b_k − T1(a b_k))` at `αg`.
    pub fn left_translates(&self, g: &[f64]) -> Result<Matrix> {
        let grp = self.parent.as_ref();
        let data = self.alg.at(grp.source(g)?.as_slice())?;
        let zero = vec![0.0; self.n()];
        let mut out = Matrix::zeros(self.n(), self.r());
        for k in 0..self.r() {
            let b = data.frame.column(k).into_owned();
            let z = &b - &data.identity_tangent * data.anchor.column(k);
            let (_, v) = tangent_compose(grp, g, &zero, data.identity_arrow.as_slice(), z.as_slice())?;
            out.set_column(k, &v);
        }
        Ok(out)
    }

    /// `(α̃(Φ), β̃(Φ))` as frame coefficients.
    pub fn source_target_pairings(&self, g: &[f64], phi: &[f64]) -> Result<(Vector, Vector)> {
        let phi = Vector::from_column_slice(phi);
        Ok((
            self.left_translates(g)?.transpose() * &phi,
            self.right_translates(g)?.transpose() * &phi,
        ))
    }

    /// `1̃_φ` at `1_m`: pairs with `T1(x) + X` as `⟨φ, X⟩`.
    pub fn identity_covector(&self, data: &AlgebroidAt, phi: &[f64]) -> Result<Vector> {
        let b = &data.frame;
        let gram = b.transpose() * b;
        let coeffs = solve(&gram, &Vector::from_column_slice(phi))?;
        Ok(data.projection.transpose() * (b * coeffs))
    }

    /// Pairings `⟨Ψ, ζ₂⟩ + ⟨Φ, ζ₁⟩` for the decomposition `ζ = ζ₂ • ζ₁` with
    /// `ζ₁ = pinv(Tα_g) Tα_{hg}(ζ) + w`, `w ∈ ker Tα_g`, and `ζ₂ = ζ • ζ₁⁻¹`.
    fn product_covector(
        &self,
        h: &[f64],
        psi: &[f64],
        g: &[f64],
        phi: &[f64],
        mut kernel: Option<&mut dyn RngCore>,
    ) -> Result<(Vector, Vector)> {
        let grp = self.parent.as_ref();
        let (n, m) = (self.n(), self.m());
        let step = grp.diff_step();
        let hg = grp.compose(h, g)?;
        let g_inv = grp.inverse(g)?;
        let (da_hg, da_g) = if m == 0 {
            (Matrix::zeros(0, n), Matrix::zeros(0, n))
        } else {
            (
                jac(|p| grp.source(p), hg.as_slice(), m, step)?,
                jac(|p| grp.source(p), g, m, step)?,
            )
        };
        let kernel_basis = if m == 0 { Matrix::identity(n, n) } else { null_space(&da_g, 1e-8) };
        let psi = Vector::from_column_slice(psi);
        let phi = Vector::from_column_slice(phi);
        let mut out = Vector::zeros(n);
        for j in 0..n {
            let mut zeta = Vector::zeros(n);
            zeta[j] = 1.0;
            let mut zeta1 = if m == 0 {
                Vector::zeros(n)
            } else {
                let rhs = &da_hg * &zeta;
                da_g.transpose() * solve(&(&da_g * da_g.transpose()), &rhs)?
            };
            if let Some(rng) = kernel.as_deref_mut() {
                let c = Vector::from_fn(kernel_basis.ncols(), |_, _| rng.gen_range(-1.0..1.0));
                zeta1 += &kernel_basis * c;
            }
            let (_, zeta1_inv) = tangent_inverse(grp, g, zeta1.as_slice())?;
            let (_, zeta2) = tangent_compose(grp, hg.as_slice(), zeta.as_slice(), g_inv.as_slice(), zeta1_inv.as_slice())?;
            out[j] = psi.dot(&zeta2) + phi.dot(&zeta1);
        }
        Ok((hg, out))
    }

    /// `Ψ • Φ` with an extra random kernel component in every decomposition.
    pub fn compose_randomized(&self, h: &[f64], g: &[f64], rng: &mut dyn RngCore) -> Result<Vector> {
        let n = self.n();
        let (hg, theta) = self.product_covector(&h[..n], &h[n..], &g[..n], &g[n..], Some(rng))?;
        Ok(join(hg.as_slice(), theta.as_slice()))
    }
}

impl Groupoid for CotangentLift {
    fn name(&self) -> String {
        format!("cotangent-lift({})", self.parent.name())
    }

    fn arrow_dim(&self) -> usize {
        2 * self.n()
    }

    fn base_dim(&self) -> usize {
        self.m() + self.r()
    }

    fn source(&self, g: &[f64]) -> Result<Vector> {
        self.check(g, self.arrow_dim())?;
        let (p, phi) = g.split_at(self.n());
        let a = self.parent.source(p)?;
        let pairing = self.left_translates(p)?.transpose() * Vector::from_column_slice(phi);
        Ok(join(a.as_slice(), pairing.as_slice()))
    }

    fn target(&self, g: &[f64]) -> Result<Vector> {
        self.check(g, self.arrow_dim())?;
        let (p, phi) = g.split_at(self.n());
        let b = self.parent.target(p)?;
        let pairing = self.right_translates(p)?.transpose() * Vector::from_column_slice(phi);
        Ok(join(b.as_slice(), pairing.as_slice()))
    }

    fn identity(&self, m: &[f64]) -> Result<Vector> {
        self.check(m, self.base_dim())?;
        let (point, phi) = m.split_at(self.m());
        let data = self.alg.at(point)?;
        let cov = self.identity_covector(&data, phi)?;
        Ok(join(data.identity_arrow.as_slice(), cov.as_slice()))
    }

    /// `⟨Φ⁻¹, ξ⁻¹⟩ = −⟨Φ, ξ⟩`, i.e. `Φ⁻¹ = −T(inv)_{g⁻¹}ᵀ Φ`.
    fn inverse(&self, g: &[f64]) -> Result<Vector> {
        self.check(g, self.arrow_dim())?;
        let grp = self.parent.as_ref();
        let (p, phi) = g.split_at(self.n());
        let p_inv = grp.inverse(p)?;
        let j = jac(|q| grp.inverse(q), p_inv.as_slice(), self.n(), grp.diff_step())?;
        let cov = -(j.transpose() * Vector::from_column_slice(phi));
        Ok(join(p_inv.as_slice(), cov.as_slice()))
    }

    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector> {
        self.check(h, self.arrow_dim())?;
        self.check(g, self.arrow_dim())?;
        let n = self.n();
        let (hg, theta) = self.product_covector(&h[..n], &h[n..], &g[..n], &g[n..], None)?;
        Ok(join(hg.as_slice(), theta.as_slice()))
    }

    fn with_source(&self, h: &[f64], m: &[f64]) -> Result<Vector> {
        self.check(h, self.arrow_dim())?;
        self.check(m, self.base_dim())?;
        let n = self.n();
        let (point, phi) = m.split_at(self.m());
        let moved = self.parent.with_source(&h[..n], point)?;
        let l = self.left_translates(moved.as_slice())?;
        let psi = Vector::from_column_slice(&h[n..]);
        let defect = Vector::from_column_slice(phi) - l.transpose() * &psi;
        let correction = &l * solve(&(l.transpose() * &l), &defect)?;
        Ok(join(moved.as_slice(), (psi + correction).as_slice()))
    }

    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector {
        let g = self.parent.sample_arrow(rng);
        let phi: Vec<f64> = (0..self.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        join(g.as_slice(), &phi)
    }

    fn composable_tolerance(&self) -> f64 {
        COMPOSABLE_LIFTED
    }

    fn diff_step(&self) -> f64 {
        FD_STEP_NESTED
    }
}

/// Max over samples of `‖X⁻¹ − (T1(aX) − X)‖∞` for `X ∈ A_m`, where `X⁻¹` is the
/// tangent inverse at `1_m`.
pub fn inverse_formula_residual(parent: &SharedGroupoid, rng: &mut dyn RngCore, count: usize) -> Result<f64> {
    let alg = Algebroid::new(parent.clone())?;
    let grp = parent.as_ref();
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let m = grp.source(grp.sample_arrow(rng).as_slice())?;
        let data = alg.at(m.as_slice())?;
        let c = Vector::from_fn(alg.rank(), |_, _| rng.gen_range(-1.0..1.0));
        let x = &data.frame * &c;
        let (_, x_inv) = tangent_inverse(grp, data.identity_arrow.as_slice(), x.as_slice())?;
        let ax = &data.anchor * &c;
        let (_, t1) = tangent_identity(grp, m.as_slice(), ax.as_slice())?;
        worst = worst.max((x_inv - (t1 - x)).amax());
    }
    Ok(worst)
}

/// Max over sampled composable pairs of the spread between two products
/// computed from independently randomized decompositions `ζ = ζ₂ • ζ₁`.
pub fn well_definedness_residual(lift: &CotangentLift, rng: &mut dyn RngCore, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let g = lift.sample_arrow(rng);
        let h = sample_composable_with(lift, g.as_slice(), rng)?;
        let a = lift.compose_randomized(h.as_slice(), g.as_slice(), rng)?;
        let b = lift.compose_randomized(h.as_slice(), g.as_slice(), rng)?;
        worst = worst.max((a - b).amax());
    }
    Ok(worst)
}


/// Per-operation disagreement between the generic lift of a group and the
/// closed-form cotangent group.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OracleResiduals {
    pub source: f64,
    pub target: f64,
    pub multiply: f64,
    pub identity: f64,
    pub inverse: f64,
}

impl OracleResiduals {
    pub fn max(&self) -> f64 {
        [self.source, self.target, self.multiply, self.identity, self.inverse]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Chart covector of a right-trivialized `(x, μ)`: `Φ = J(x)ᵀ μ` with `J` the
/// right-trivialized differential of `exp`.
pub fn chart_covector(group: &MatrixLieGroup, a: &[f64]) -> Vector {
    let n = group.dim();
    let x = Vector::from_column_slice(&a[..n]);
    let phi = group.right_jacobian(&x).transpose() * Vector::from_column_slice(&a[n..]);
    join(&a[..n], phi.as_slice())
}

/// Compares `cotangent-lift(group(G))` with `cotangent-group(G)` on sampled
/// composable pairs, mapping arrows through [`chart_covector`].
pub fn lift_oracle_residuals(group: Arc<MatrixLieGroup>, rng: &mut dyn RngCore, count: usize) -> Result<OracleResiduals> {
    let lift = CotangentLift::new(Arc::new(GroupAsGroupoid::new(group.clone())))?;
    let cot = CotangentGroup::new(group.clone());
    let to_lift = |a: &Vector| chart_covector(&group, a.as_slice());
    let d = |a: &Vector, b: &Vector| (a - b).amax();
    let mut r = OracleResiduals::default();
    for _ in 0..count {
        let g = cot.sample_arrow(rng);
        let h = sample_composable_with(&cot, g.as_slice(), rng)?;
        let (lg, lh) = (to_lift(&g), to_lift(&h));
        r.source = r.source.max(d(&lift.source(lg.as_slice())?, &cot.source(g.as_slice())?));
        r.target = r.target.max(d(&lift.target(lg.as_slice())?, &cot.target(g.as_slice())?));
        let prod = multiply(&lift, lh.as_slice(), lg.as_slice())?;
        r.multiply = r.multiply.max(d(&prod, &to_lift(&multiply(&cot, h.as_slice(), g.as_slice())?)));
        let phi = cot.source(g.as_slice())?;
        r.identity = r.identity.max(d(&lift.identity(phi.as_slice())?, &to_lift(&cot.identity(phi.as_slice())?)));
        r.inverse = r.inverse.max(d(&lift.inverse(lg.as_slice())?, &to_lift(&cot.inverse(g.as_slice())?)));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoids::{axiom_residuals, Action, ActionKind, Pair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group_lift(group: MatrixLieGroup) -> CotangentLift {
        CotangentLift::new(Arc::new(GroupAsGroupoid::new(Arc::new(group)))).unwrap()
    }

    #[test]
    fn zero_covector_pairs_to_zero() {
        let lift = group_lift(MatrixLieGroup::so3());
        let a = [0.1, -0.1, 0.05, 0.0, 0.0, 0.0];
        assert!(lift.source(&a).unwrap().amax() < 1e-12);
        assert!(lift.target(&a).unwrap().amax() < 1e-12);
    }

    #[test]
    fn identity_covectors_have_matching_ends() {
        let lift = CotangentLift::new(Arc::new(Action::new(Arc::new(MatrixLieGroup::so3()), ActionKind::Coadjoint))).unwrap();
        let m = [0.3, -0.2, 0.5, 0.7, 1.0, -0.4];
        let one = lift.identity(&m).unwrap();
        assert!((lift.source(one.as_slice()).unwrap() - Vector::from_column_slice(&m)).amax() < 1e-7);
        assert!((lift.target(one.as_slice()).unwrap() - Vector::from_column_slice(&m)).amax() < 1e-7);

        let zero = lift.identity(&[0.3, -0.2, 0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!(zero.rows(6, 6).amax() < 1e-12);
    }

    #[test]
    fn abelian_product_adds_arrows() {
        let lift = group_lift(MatrixLieGroup::translations(2));
        let h = [0.1, 0.2, 1.0, -2.0];
        let g = [-0.3, 0.05, 1.0, -2.0];
        let p = multiply(&lift, &h, &g).unwrap();
        let expected = Vector::from_column_slice(&[-0.2, 0.25, 1.0, -2.0]);
        assert!((p - expected).amax() < 1e-7);
    }

    #[test]
    fn mismatched_covectors_are_rejected() {
        let lift = group_lift(MatrixLieGroup::translations(2));
        let r = multiply(&lift, &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(r, Err(Error::NotComposable { .. })));
    }

    #[test]
    fn agrees_with_closed_form_cotangent_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for group in [MatrixLieGroup::translations(3), MatrixLieGroup::heisenberg(), MatrixLieGroup::so3(), MatrixLieGroup::sl2()] {
            let name = group.name().to_string();
            let r = lift_oracle_residuals(Arc::new(group), &mut rng, 20).unwrap();
            assert!(r.max() < 1e-6, "{name}: {r:?}");
        }
    }

    #[test]
    fn left_identity_and_double_inverse() {
        let lift = CotangentLift::new(Arc::new(Action::new(Arc::new(MatrixLieGroup::heisenberg()), ActionKind::Coadjoint))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let a = lift.sample_arrow(&mut rng);
            let one = lift.identity(lift.target(a.as_slice()).unwrap().as_slice()).unwrap();
            let p = multiply(&lift, one.as_slice(), a.as_slice()).unwrap();
            assert!((&p - &a).amax() < 1e-7, "{}", (&p - &a).amax());
            let back = lift.inverse(lift.inverse(a.as_slice()).unwrap().as_slice()).unwrap();
            assert!((back - &a).amax() < 1e-7);
        }
    }

    #[test]
    fn decompositions_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lift = group_lift(MatrixLieGroup::so3());
        assert!(well_definedness_residual(&lift, &mut rng, 5).unwrap() < 1e-7);
        let lift = CotangentLift::new(Arc::new(Pair::new(2))).unwrap();
        assert!(well_definedness_residual(&lift, &mut rng, 5).unwrap() < 1e-7);
    }

    #[test]
    fn inverse_of_algebroid_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let parent: SharedGroupoid = Arc::new(Action::new(Arc::new(MatrixLieGroup::so3()), ActionKind::Coadjoint));
        assert!(inverse_formula_residual(&parent, &mut rng, 10).unwrap() < 1e-7);
    }

    #[test]
    fn pair_lift_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lift = CotangentLift::new(Arc::new(Pair::new(1))).unwrap();
        let r = axiom_residuals(&lift, &mut rng, 10).unwrap();
        assert!(r.max() < 1e-6, "{r:?}");
    }
}
