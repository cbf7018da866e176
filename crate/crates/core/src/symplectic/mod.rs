//! The canonical symplectic structure on `T*G` in right-trivialized
//! exponential coordinates, and the checks that make `T*G ⇒ 𝔤*` a symplectic
//! and Poisson groupoid.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::matgroups::{sample_ball, MatrixLieGroup};
use crate::numcore::{exterior_d1_matrix, inverse, jacobian, solve, Covector, Matrix, OneFormField, Vector};
use crate::poisson::PoissonStructure;
use crate::tolerances::{CHART_SAMPLE_RADIUS, FD_STEP};
use crate::{Error, Result};

mod checks;

pub use checks::{
    base_map_w, basic_identity_residual, dimension_identities, graph_isotropy_residual,
    identity_lagrangian_residual, induced_base_poisson_residual, inversion_antisymplectic_residual,
    omega_flat_morphism_residual, orthogonality_residual, pg_coisotropy_suite,
    tangent_lift_poisson_map_residual, CotangentSetting, DimensionCheck, FlatMorphismResiduals,
    GraphIsotropy, InducedPoissonResiduals, PoissonGroupoidResiduals,
};

/// `⟨ω♭(X), Y⟩ = FLAT_SIGN · ω(X, Y)`.
pub const FLAT_SIGN: f64 = -1.0;

/// `w(x) = W_SIGN · ι_{T1(x)} ω` restricted to the A-fibre.
pub const W_SIGN: f64 = -1.0;

/// `r = R_SIGN · w*`.
pub const R_SIGN: f64 = -1.0;

/// Points with `‖x‖ ≥ π` are rejected: beyond it `exp` stops being a chart on SO(3).
pub const CHART_DOMAIN_RADIUS: f64 = PI;

/// Coordinates `(x, μ)` on `T*G`: the covector `φ` at `g = exp(x)` with
/// `φ(V) = ⟨μ, V g⁻¹⟩`.
#[derive(Clone, Debug)]
pub struct CotangentPhaseChart {
    group: Arc<MatrixLieGroup>,
}

impl CotangentPhaseChart {
    pub fn new(group: Arc<MatrixLieGroup>) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &Arc<MatrixLieGroup> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.group.dim()
    }

    pub fn dim(&self) -> usize {
        2 * self.n()
    }

    fn check(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        let r = point[..self.n()].iter().map(|v| v * v).sum::<f64>().sqrt();
        if r >= CHART_DOMAIN_RADIUS {
            return Err(Error::ChartDomain(format!("|x| = {r} in the exponential chart of {}", self.group.name())));
        }
        Ok(())
    }

    /// Components of `λ` at `(x, μ)`: `(J(x)ᵀ μ, 0)`.
    pub fn liouville_components(&self, point: &[f64]) -> Result<Covector> {
        self.check(point)?;
        let n = self.n();
        let x = Vector::from_column_slice(&point[..n]);
        let j = self.group.right_jacobian(&x);
        let top = j.transpose() * Vector::from_column_slice(&point[n..]);
        Ok(Covector::from_iterator(2 * n, top.iter().copied().chain(std::iter::repeat(0.0).take(n))))
    }

    /// `λ(ξ) = ⟨μ, ġ g⁻¹⟩` for `ξ = (ẋ, μ̇)`.
    pub fn liouville(&self, point: &[f64], tangent: &[f64]) -> Result<f64> {
        if tangent.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: tangent.len(),
            });
        }
        Ok(self.liouville_components(point)?.dot(&Vector::from_column_slice(tangent)))
    }

    pub fn liouville_form(&self) -> OneFormField {
        let chart = self.clone();
        OneFormField::new(crate::numcore::Chart::new(self.dim(), "T*G"), move |p| {
            chart
                .liouville_components(p)
                .unwrap_or_else(|_| Covector::from_element(p.len(), f64::NAN))
        })
    }

    /// A point with `‖x‖ < 0.5` and `μ ∈ [−1, 1]ⁿ`.
    pub fn sample_point(&self, rng: &mut dyn RngCore) -> Vector {
        let x = sample_ball(rng, self.n(), CHART_SAMPLE_RADIUS);
        let mu: Vec<f64> = (0..self.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Vector::from_iterator(self.dim(), x.iter().copied().chain(mu))
    }
}

/// `ω = dλ`, evaluated by a central-difference exterior derivative of `λ`.
#[derive(Clone)]
pub struct SymplecticForm {
    chart: CotangentPhaseChart,
    lambda: OneFormField,
    step: f64,
}

impl SymplecticForm {
    pub fn new(chart: CotangentPhaseChart) -> Self {
        Self::with_step(chart, FD_STEP)
    }

    pub fn with_step(chart: CotangentPhaseChart, step: f64) -> Self {
        let lambda = chart.liouville_form();
        Self { chart, lambda, step }
    }

    pub fn chart(&self) -> &CotangentPhaseChart {
        &self.chart
    }

    /// `Ω` with `ω(V, W) = Vᵀ Ω W`.
    pub fn matrix(&self, point: &[f64]) -> Result<Matrix> {
        self.chart.check(point)?;
        exterior_d1_matrix(&self.lambda, point, self.step)
    }

    pub fn eval(&self, point: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
        let m = self.matrix(point)?;
        Ok(Vector::from_column_slice(v).dot(&(m * Vector::from_column_slice(w))))
    }

    /// `ω((X₁, μ̇₁), (X₂, μ̇₂)) = ⟨μ̇₁, X₂⟩ − ⟨μ̇₂, X₁⟩ + ⟨μ, [X₁, X₂]⟩` with
    /// `X_i = J(x) ẋ_i` the right-trivialized group velocities.
    pub fn closed_form_matrix(&self, point: &[f64]) -> Result<Matrix> {
        self.chart.check(point)?;
        let group = self.chart.group();
        let n = self.chart.n();
        let x = Vector::from_column_slice(&point[..n]);
        let mu = Vector::from_column_slice(&point[n..]);
        let j = group.right_jacobian(&x);
        let g = group.algebra();
        let mut m = Matrix::zeros(2 * n, 2 * n);
        // ⟨μ, [J e_a, J e_b]⟩
        let mut lp = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                lp[(a, b)] = (0..n)
                    .map(|k| {
                        let mut s = 0.0;
                        for i in 0..n {
                            for l in 0..n {
                                s += g.constant(k, i, l) * j[(i, a)] * j[(l, b)];
                            }
                        }
                        mu[k] * s
                    })
                    .sum();
            }
        }
        m.view_mut((0, 0), (n, n)).copy_from(&lp);
        m.view_mut((n, 0), (n, n)).copy_from(&j);
        m.view_mut((0, n), (n, n)).copy_from(&(-j.transpose()));
        Ok(m)
    }

    /// `ω♭(V)` with `⟨ω♭(V), Y⟩ = FLAT_SIGN · ω(V, Y)`.
    pub fn flat(&self, point: &[f64], v: &[f64]) -> Result<Covector> {
        let m = self.matrix(point)?;
        Ok(FLAT_SIGN * (m.transpose() * Vector::from_column_slice(v)))
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn sharp(&self, point: &[f64], psi: &[f64]) -> Result<Vector> {
        let m = self.matrix(point)?;
        solve(&(FLAT_SIGN * m.transpose()), &Vector::from_column_slice(psi))
    }

    /// Max of `|dω(e_i, e_j, e_k)| = |∂_iΩ_jk + ∂_jΩ_ki + ∂_kΩ_ij|` at `point`.
    pub fn closedness_residual(&self, point: &[f64], step: f64) -> Result<f64> {
        let d = self.chart.dim();
        let mut partials = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            let plus: Vec<f64> = point.iter().zip(&e).map(|(p, v)| p + step * v).collect();
            let minus: Vec<f64> = point.iter().zip(&e).map(|(p, v)| p - step * v).collect();
            partials.push((self.matrix(&plus)? - self.matrix(&minus)?) / (2.0 * step));
        }
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = partials[i][(j, k)] + partials[j][(k, i)] + partials[k][(i, j)];
                    worst = worst.max(c.abs());
                }
            }
        }
        Ok(worst)
    }

    /// Poisson bivector of `{f₁, f₂} = ω((df₁)#, (df₂)#)`, i.e. `Π = Ω⁻ᵀ`.
    pub fn poisson_bivector(&self, point: &[f64]) -> Result<Matrix> {
        Ok(inverse(&self.matrix(point)?)?.transpose())
    }

    /// [`poisson_bivector`](Self::poisson_bivector) as a structure on the phase chart.
    pub fn poisson_structure(&self) -> PoissonStructure {
        let form = self.clone();
        let d = self.chart.dim();
        PoissonStructure::from_fn(format!("ω⁻¹ on T*{}", self.chart.group().name()), d, move |p| {
            form.poisson_bivector(p)
                .unwrap_or_else(|_| Matrix::from_element(d, d, f64::NAN))
        })
    }
}

/// Largest deviation of the finite-difference `ω` from the closed form at `point`.
pub fn closed_form_residual(form: &SymplecticForm, point: &[f64]) -> Result<f64> {
    Ok((form.matrix(point)? - form.closed_form_matrix(point)?).amax())
}

/// `Dβ(g)` for the right-trivialized target `(x, μ) ↦ μ`, by central differences.
pub(crate) fn target_jacobian(chart: &CotangentPhaseChart, point: &[f64]) -> Result<Matrix> {
    let n = chart.n();
    jacobian(|p| Vector::from_column_slice(&p[n..]), point, FD_STEP)
}
