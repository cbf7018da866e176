//! Concrete matrix Lie groups: exact products, exponential charts, adjoint
//! and coadjoint actions, tangent translations and the tangent group.
//!
//! Covectors at `g` are right-trivialized: `μ ∈ 𝔤*` acts on `V ∈ T_gG` by
//! `⟨μ, V g⁻¹⟩`.

mod elements;
mod expm;

use rand::Rng;

pub use elements::{tangent_group_mul, GroupCovector, GroupElement, GroupTangent};
pub use expm::{expm, logm, logm_unipotent};

use crate::liealg::{AlgCovector, AlgVector, LieAlgebra};
use crate::numcore::{self, Matrix, Vector};
use crate::tolerances::{ALGEBRA_SPAN, CHART_SAMPLE_RADIUS, MEMBERSHIP};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Translations,
    Unipotent,
    Orthogonal,
    SpecialLinear,
}

#[derive(Clone, Debug)]
pub struct MatrixLieGroup {
    name: String,
    kind: Kind,
    size: usize,
    algebra: LieAlgebra,
    basis: Vec<Matrix>,
    // least-squares projection of vec(M) onto the basis
    proj: Matrix,
    stacked: Matrix,
}

fn unit(m: usize, i: usize, j: usize) -> Matrix {
    let mut e = Matrix::zeros(m, m);
    e[(i, j)] = 1.0;
    e
}

impl MatrixLieGroup {
    fn build(name: String, kind: Kind, size: usize, algebra: LieAlgebra, basis: Vec<Matrix>) -> Self {
        let n = basis.len();
        let stacked = Matrix::from_fn(size * size, n, |r, c| basis[c].as_slice()[r]);
        let gram = stacked.transpose() * &stacked;
        let proj = numcore::inverse(&gram).expect("independent basis") * stacked.transpose();
        Self {
            name,
            kind,
            size,
            algebra,
            basis,
            proj,
            stacked,
        }
    }

    /// Translations of ℝⁿ as `(n+1)×(n+1)` unipotent matrices.
    pub fn translations(n: usize) -> Self {
        assert!(n >= 1);
        let basis = (0..n).map(|i| unit(n + 1, i, n)).collect();
        let name = format!("r{n}");
        let algebra = LieAlgebra::abelian(n).rename(name.clone());
        Self::build(name, Kind::Translations, n + 1, algebra, basis)
    }

    /// Upper unitriangular 3×3 matrices with `E1 = e12`, `E2 = e23`, `E3 = e13`.
    pub fn heisenberg() -> Self {
        let basis = vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)];
        Self::build("h3".into(), Kind::Unipotent, 3, LieAlgebra::heisenberg(), basis)
    }

    /// Rotations with the infinitesimal generators `L1, L2, L3`, `[L1, L2] = L3`.
    pub fn so3() -> Self {
        let l = |a: usize, b: usize| unit(3, b, a) - unit(3, a, b);
        let basis = vec![l(1, 2), l(2, 0), l(0, 1)];
        Self::build("so3".into(), Kind::Orthogonal, 3, LieAlgebra::so3(), basis)
    }

    /// SL(2,ℝ) with basis `H, E, F`.
    pub fn sl2() -> Self {
        let h = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let basis = vec![h, unit(2, 0, 1), unit(2, 1, 0)];
        Self::build("sl2".into(), Kind::SpecialLinear, 2, LieAlgebra::sl2(), basis)
    }

    /// Catalog lookup: `r<n>`, `h3`, `so3`, `sl2`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "h3" | "heisenberg" => Ok(Self::heisenberg()),
            "so3" => Ok(Self::so3()),
            "sl2" => Ok(Self::sl2()),
            _ => name
                .strip_prefix('r')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| (1..=8).contains(n))
                .map(Self::translations)
                .ok_or_else(|| Error::Unknown {
                    kind: "group",
                    name: name.to_string(),
                }),
        }
    }

    pub fn catalog_names() -> &'static [&'static str] {
        &["h3", "r2", "sl2", "so3"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Matrix size `m`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Group dimension `n`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Algebra whose constants are the matrix commutators of the basis.
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// The bracket of right-invariant vector fields, `[X^R, Y^R] = −[X, Y]^R`.
    pub fn right_invariant_algebra(&self) -> LieAlgebra {
        self.algebra.opposite().rename(format!("{}-right", self.name))
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self.kind, Kind::Translations | Kind::Unipotent)
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.size, self.size)
    }

    /// Distance from the defining equations of the group.
    pub fn membership_residual(&self, g: &Matrix) -> f64 {
        if g.nrows() != self.size || g.ncols() != self.size {
            return f64::INFINITY;
        }
        match self.kind {
            Kind::Translations | Kind::Unipotent => {
                let mut worst: f64 = 0.0;
                for i in 0..self.size {
                    worst = worst.max((g[(i, i)] - 1.0).abs());
                    for j in 0..i {
                        worst = worst.max(g[(i, j)].abs());
                    }
                    if self.kind == Kind::Translations {
                        for j in (i + 1)..self.size {
                            if j != self.size - 1 {
                                worst = worst.max(g[(i, j)].abs());
                            }
                        }
                    }
                }
                worst
            }
            Kind::Orthogonal => {
                let orth = (g.transpose() * g - self.identity()).amax();
                orth.max((g.determinant() - 1.0).abs())
            }
            Kind::SpecialLinear => (g.determinant() - 1.0).abs(),
        }
    }

    pub fn is_member(&self, g: &Matrix) -> bool {
        self.membership_residual(g) < MEMBERSHIP
    }

    /// `Σ x_i E_i`.
    pub fn hat(&self, x: &AlgVector) -> Matrix {
        let mut m = Matrix::zeros(self.size, self.size);
        for (xi, e) in x.iter().zip(&self.basis) {
            m += e * *xi;
        }
        m
    }

    /// Coordinates of a matrix in the algebra basis; errors if it leaves the span.
    pub fn vee(&self, m: &Matrix) -> Result<AlgVector> {
        let flat = Vector::from_column_slice(m.as_slice());
        let coords = &self.proj * &flat;
        let residual = (&self.stacked * &coords - flat).amax();
        if residual > ALGEBRA_SPAN * (1.0 + m.amax()) {
            return Err(Error::OutsideAlgebra { residual });
        }
        Ok(coords)
    }

    pub fn exp(&self, x: &AlgVector) -> Matrix {
        expm(&self.hat(x))
    }

    /// Inverse of `exp` near the identity.
    pub fn log(&self, g: &Matrix) -> Result<AlgVector> {
        let l = if self.is_nilpotent() {
            logm_unipotent(g)
        } else {
            logm(g)?
        };
        self.vee(&l)
    }

    /// Matrix of `Ad_g` in the algebra basis.
    pub fn ad_matrix(&self, g: &Matrix) -> Result<Matrix> {
        let g_inv = numcore::inverse(g)?;
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (j, e) in self.basis.iter().enumerate() {
            out.set_column(j, &self.vee(&(g * e * &g_inv))?);
        }
        Ok(out)
    }

    pub fn ad(&self, g: &Matrix, x: &AlgVector) -> Result<AlgVector> {
        let g_inv = numcore::inverse(g)?;
        self.vee(&(g * self.hat(x) * g_inv))
    }

    /// `θ ∘ Ad_{g⁻¹}`.
    pub fn coadjoint(&self, g: &Matrix, theta: &AlgCovector) -> Result<AlgCovector> {
        let g_inv = numcore::inverse(g)?;
        Ok(self.ad_matrix(&g_inv)?.transpose() * theta)
    }

    /// Right-trivialized differential of `exp` at `x`:
    /// `d/dt exp(x + t y) · exp(x)⁻¹ = J(x) y` with `J(x) = (e^{ad_x} − 1)/ad_x`.
    pub fn right_jacobian(&self, x: &AlgVector) -> Matrix {
        phi_block(&self.algebra.ad_matrix(x))
    }

    /// Left-trivialized differential, `(1 − e^{−ad_x})/ad_x`.
    pub fn left_jacobian(&self, x: &AlgVector) -> Matrix {
        phi_block(&(-self.algebra.ad_matrix(x)))
    }

    /// Max deviation between matrix commutators and the stored constants.
    pub fn commutator_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let comm = &self.basis[i] * &self.basis[j] - &self.basis[j] * &self.basis[i];
                let expected = self.hat(&self.algebra.bracket_unchecked(&self.algebra.basis(i), &self.algebra.basis(j)));
                worst = worst.max((comm - expected).amax());
            }
        }
        worst
    }

    /// Exponential chart centred at `g0 = exp(center)`.
    pub fn chart(&self, center: &AlgVector) -> Result<ExpChart> {
        if center.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: center.len(),
            });
        }
        let g0 = self.exp(center);
        let g0_inv = numcore::inverse(&g0)?;
        let ad_g0 = self.ad_matrix(&g0)?;
        Ok(ExpChart {
            g0,
            g0_inv,
            ad_g0,
            nilpotent: self.is_nilpotent(),
        })
    }

    /// Uniform sample of the coordinate ball of the given radius.
    pub fn sample_coords<R: Rng + ?Sized>(&self, rng: &mut R, radius: f64) -> AlgVector {
        sample_ball(rng, self.dim(), radius)
    }

    pub fn sample_matrix<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        self.exp(&self.sample_coords(rng, CHART_SAMPLE_RADIUS))
    }
}

/// `Σ_k A^k/(k+1)!`, read off the block exponential of `[[A, I], [0, 0]]`.
fn phi_block(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut block = Matrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((0, n), (n, n)).fill_with_identity();
    expm(&block).view((0, n), (n, n)).into_owned()
}

/// Sample of the open ball of radius `radius` in ℝⁿ, by rejection from the cube.
pub fn sample_ball<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> Vector {
    loop {
        let v = Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() < 1.0 {
            return v * radius;
        }
    }
}

/// `x ↦ g0 · exp(Σ x_i E_i)` and its inverse near `g0`.
#[derive(Clone, Debug)]
pub struct ExpChart {
    g0: Matrix,
    g0_inv: Matrix,
    ad_g0: Matrix,
    nilpotent: bool,
}

impl ExpChart {
    pub fn center(&self) -> &Matrix {
        &self.g0
    }

    pub fn point(&self, group: &MatrixLieGroup, x: &AlgVector) -> Matrix {
        &self.g0 * group.exp(x)
    }

    pub fn coords(&self, group: &MatrixLieGroup, g: &Matrix) -> Result<AlgVector> {
        let rel = &self.g0_inv * g;
        if !self.nilpotent {
            let dist = (&rel - group.identity()).norm();
            if dist >= 1.0 {
                return Err(Error::ChartDomain(format!(
                    "‖g0⁻¹g − I‖ = {dist:.3} ≥ 1 in the {} chart",
                    group.name()
                )));
            }
        }
        group.log(&rel)
    }

    /// Right-trivialized chart Jacobian: `ẋ ↦ (d/dt g(x + tẋ)) g(x)⁻¹`.
    pub fn right_jacobian(&self, group: &MatrixLieGroup, x: &AlgVector) -> Matrix {
        &self.ad_g0 * group.right_jacobian(x)
    }
}
