//! Poisson structures in a single chart: brackets of functions, the anchor,
//! the bracket of 1-forms, Lie–Poisson and tangent-lift structures, Poisson
//! maps and coisotropic submanifolds.
//!
//! The anchor is fixed by `⟨φ, π#ψ⟩ = π(ψ, φ)`, i.e. `(π#ψ)^j = Σ_i π^{ij} ψ_i`.

mod algebroid;
mod lift;
mod maps;
mod testfns;

use std::fmt;
use std::sync::Arc;

pub use algebroid::{
    cotangent_algebroid_residuals, exact_forms_residual, oneform_bracket, AlgebroidResiduals,
};
pub use lift::{courant_residuals, tangent_lift, CourantResiduals};
pub use maps::{coisotropy_residual, poisson_map_residual, Submanifold};
pub use testfns::{random_polynomial, test_functions, Polynomial};

use crate::liealg::LieAlgebra;
use crate::numcore::{ensure_finite, gradient, Chart, Covector, DiffMode, Matrix, ScalarField, Vector};
use crate::tolerances::FD_STEP;
use crate::{Error, Result};

type MatrixFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

/// One monomial `coef · Π x_k^{powers[k]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

impl Monomial {
    fn eval(&self, x: &[f64]) -> f64 {
        self.powers
            .iter()
            .zip(x)
            .fold(self.coef, |acc, (&p, &xi)| acc * xi.powi(p as i32))
    }
}

#[derive(Clone)]
enum Tensor {
    Constant(Matrix),
    // π(x) = Σ_k x_k C_k
    Linear(Vec<Matrix>),
    // upper-triangular entries (i, j, terms)
    Polynomial(Vec<(usize, usize, Vec<Monomial>)>),
    Product(Vec<PoissonStructure>),
    Scaled(Box<PoissonStructure>, f64),
    Lift(Box<PoissonStructure>),
    Custom(MatrixFn),
}

/// A bivector field `π^{ij}(x)` on a chart.
#[derive(Clone)]
pub struct PoissonStructure {
    chart: Chart,
    name: String,
    tensor: Tensor,
}

impl fmt::Debug for PoissonStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PoissonStructure")
            .field("name", &self.name)
            .field("dim", &self.chart.dim())
            .finish()
    }
}

fn check_antisymmetric(m: &Matrix) -> Result<()> {
    let defect = (m + m.transpose()).amax();
    if defect != 0.0 {
        return Err(Error::Config(format!(
            "bivector matrix is not antisymmetric (defect {defect:e})"
        )));
    }
    Ok(())
}

impl PoissonStructure {
    /// Constant bivector given as an antisymmetric matrix.
    pub fn constant(name: impl Into<String>, pi: Matrix) -> Result<Self> {
        if pi.nrows() != pi.ncols() {
            return Err(Error::DimensionMismatch {
                expected: pi.nrows(),
                got: pi.ncols(),
            });
        }
        check_antisymmetric(&pi)?;
        Ok(Self {
            chart: Chart::new(pi.nrows(), "P"),
            name: name.into(),
            tensor: Tensor::Constant(pi),
        })
    }

    /// Canonical structure on `ℝ^{2n}` with coordinates `(q_1..q_n, p_1..p_n)`, `{q_i, p_i} = 1`.
    pub fn constant_symplectic(n: usize) -> Self {
        let mut pi = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            pi[(i, n + i)] = 1.0;
            pi[(n + i, i)] = -1.0;
        }
        Self {
            chart: Chart::new(2 * n, "T*R^n"),
            name: format!("constant-symplectic {n}"),
            tensor: Tensor::Constant(pi),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            chart: Chart::new(dim, "P"),
            name: format!("zero {dim}"),
            tensor: Tensor::Constant(Matrix::zeros(dim, dim)),
        }
    }

    /// `π^{ij}(φ) = Σ_k c^k_ij φ_k` on `𝔤*`.
    pub fn lie_poisson(g: &LieAlgebra) -> Self {
        let n = g.dim();
        let coeffs = (0..n)
            .map(|k| Matrix::from_fn(n, n, |i, j| g.constant(k, i, j)))
            .collect();
        Self {
            chart: Chart::new(n, format!("{}*", g.name())),
            name: format!("lie-poisson {}", g.name()),
            tensor: Tensor::Linear(coeffs),
        }
    }

    /// Polynomial bivector from entries `(i, j, terms)` with `i ≠ j`; the
    /// entry at `(j, i)` is completed by antisymmetry.
    pub fn polynomial(
        name: impl Into<String>,
        dim: usize,
        entries: Vec<(usize, usize, Vec<Monomial>)>,
    ) -> Result<Self> {
        let mut normalized: Vec<(usize, usize, Vec<Monomial>)> = Vec::new();
        for (i, j, terms) in entries {
            if i >= dim || j >= dim || i == j {
                return Err(Error::Config(format!(
                    "bivector entry ({i}, {j}) invalid in dimension {dim}"
                )));
            }
            if let Some(t) = terms.iter().find(|t| t.powers.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.powers.len(),
                });
            }
            let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            let terms: Vec<Monomial> = terms
                .into_iter()
                .map(|t| Monomial {
                    coef: sign * t.coef,
                    powers: t.powers,
                })
                .collect();
            match normalized.iter_mut().find(|(x, y, _)| *x == a && *y == b) {
                Some(entry) => entry.2.extend(terms),
                None => normalized.push((a, b, terms)),
            }
        }
        Ok(Self {
            chart: Chart::new(dim, "P"),
            name: name.into(),
            tensor: Tensor::Polynomial(normalized),
        })
    }

    /// Bivector given by an arbitrary function; antisymmetry is enforced at evaluation.
    pub fn from_fn(
        name: impl Into<String>,
        dim: usize,
        f: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            chart: Chart::new(dim, "P"),
            name: name.into(),
            tensor: Tensor::Custom(Arc::new(f)),
        }
    }

    /// Block-diagonal structure on the product of the factors' charts.
    pub fn product(factors: Vec<PoissonStructure>) -> Self {
        let dim = factors.iter().map(|f| f.dim()).sum();
        let name = factors
            .iter()
            .map(|f| f.name.clone())
            .collect::<Vec<_>>()
            .join(" × ");
        Self {
            chart: Chart::new(dim, "product"),
            name,
            tensor: Tensor::Product(factors),
        }
    }

    /// `s · π`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            chart: self.chart.clone(),
            name: format!("{s}·({})", self.name),
            tensor: Tensor::Scaled(Box::new(self.clone()), s),
        }
    }

    /// The opposite structure `−π`.
    pub fn reversed(&self) -> Self {
        Self {
            name: format!("−({})", self.name),
            ..self.scaled(-1.0)
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The matrix `π^{ij}(x)`.
    pub fn eval(&self, x: &[f64]) -> Matrix {
        let n = self.dim();
        match &self.tensor {
            Tensor::Constant(m) => m.clone(),
            Tensor::Linear(cs) => {
                let mut m = Matrix::zeros(n, n);
                for (c, xk) in cs.iter().zip(x) {
                    m += c * *xk;
                }
                m
            }
            Tensor::Polynomial(entries) => {
                let mut m = Matrix::zeros(n, n);
                for (i, j, terms) in entries {
                    let v: f64 = terms.iter().map(|t| t.eval(x)).sum();
                    m[(*i, *j)] += v;
                    m[(*j, *i)] -= v;
                }
                m
            }
            Tensor::Product(factors) => {
                let mut m = Matrix::zeros(n, n);
                let mut off = 0;
                for f in factors {
                    let d = f.dim();
                    m.view_mut((off, off), (d, d)).copy_from(&f.eval(&x[off..off + d]));
                    off += d;
                }
                m
            }
            Tensor::Scaled(inner, s) => inner.eval(x) * *s,
            Tensor::Lift(inner) => {
                let k = inner.dim();
                let (base, vel) = x.split_at(k);
                let p = inner.eval(base);
                let dp = inner.derivative(base, vel);
                let mut m = Matrix::zeros(n, n);
                m.view_mut((0, k), (k, k)).copy_from(&p);
                m.view_mut((k, 0), (k, k)).copy_from(&p);
                m.view_mut((k, k), (k, k)).copy_from(&dp);
                m
            }
            Tensor::Custom(f) => {
                let m = f(x);
                (&m - m.transpose()) * 0.5
            }
        }
    }

    /// Directional derivative `Dπ(x)[v]`; exact for constant and linear tensors.
    pub fn derivative(&self, x: &[f64], v: &[f64]) -> Matrix {
        let n = self.dim();
        match &self.tensor {
            Tensor::Constant(_) => Matrix::zeros(n, n),
            Tensor::Linear(cs) => {
                let mut m = Matrix::zeros(n, n);
                for (c, vk) in cs.iter().zip(v) {
                    m += c * *vk;
                }
                m
            }
            Tensor::Scaled(inner, s) => inner.derivative(x, v) * *s,
            Tensor::Product(factors) => {
                let mut m = Matrix::zeros(n, n);
                let mut off = 0;
                for f in factors {
                    let d = f.dim();
                    m.view_mut((off, off), (d, d))
                        .copy_from(&f.derivative(&x[off..off + d], &v[off..off + d]));
                    off += d;
                }
                m
            }
            _ => {
                let h = FD_STEP;
                let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + h * b).collect();
                let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - h * b).collect();
                (self.eval(&plus) - self.eval(&minus)) / (2.0 * h)
            }
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<Matrix> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let m = self.eval(x);
        ensure_finite(x, m.as_slice(), "bivector")?;
        Ok(m)
    }

    /// `π(ψ, φ) = Σ π^{ij} ψ_i φ_j` at `x`.
    pub fn pair(&self, psi: &Covector, phi: &Covector, x: &[f64]) -> Result<f64> {
        Ok(psi.dot(&(self.check_point(x)? * phi)))
    }
}

/// `{f, g}(x) = Σ π^{ij}(x) ∂_i f ∂_j g`.
pub fn bracket_fn(pi: &PoissonStructure, f: &ScalarField, g: &ScalarField, x: &[f64]) -> Result<f64> {
    let m = pi.check_point(x)?;
    let df = gradient(f, x, DiffMode::default())?;
    let dg = gradient(g, x, DiffMode::default())?;
    Ok(df.dot(&(m * dg)))
}

/// `π#ψ` at `x`, with `(π#ψ)^j = Σ_i π^{ij} ψ_i`.
pub fn anchor(pi: &PoissonStructure, psi: &Covector, x: &[f64]) -> Result<Vector> {
    let m = pi.check_point(x)?;
    if psi.len() != pi.dim() {
        return Err(Error::DimensionMismatch {
            expected: pi.dim(),
            got: psi.len(),
        });
    }
    Ok(m.transpose() * psi)
}

/// Max over points and coordinate triples of `|{x_i,{x_j,x_k}} + cyclic|`,
/// using `{x_i, π^{jk}} = Σ_l π^{il} ∂_l π^{jk}`.
pub fn jacobi_residual_pts(pi: &PoissonStructure, points: &[Vector]) -> Result<f64> {
    let n = pi.dim();
    let mut worst: f64 = 0.0;
    for x in points {
        let m = pi.check_point(x.as_slice())?;
        let mut e = vec![0.0; n];
        let partials: Vec<Matrix> = (0..n)
            .map(|l| {
                e[l] = 1.0;
                let d = pi.derivative(x.as_slice(), &e);
                e[l] = 0.0;
                d
            })
            .collect();
        let bracket_with = |i: usize, j: usize, k: usize| -> f64 {
            (0..n).map(|l| m[(i, l)] * partials[l][(j, k)]).sum()
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let cyc = bracket_with(i, j, k) + bracket_with(j, k, i) + bracket_with(k, i, j);
                    worst = worst.max(cyc.abs());
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pts(n: usize, count: usize, seed: u64) -> Vec<Vector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| crate::matgroups::sample_ball(&mut rng, n, 1.0))
            .collect()
    }

    #[test]
    fn canonical_bracket_and_anchor() {
        let pi = PoissonStructure::constant_symplectic(1);
        let c = pi.chart().clone();
        let (q, p) = (ScalarField::coordinate(c.clone(), 0), ScalarField::coordinate(c, 1));
        assert_eq!(bracket_fn(&pi, &q, &p, &[0.3, 0.4]).unwrap(), 1.0);
        let dq = Covector::from_column_slice(&[1.0, 0.0]);
        assert_eq!(anchor(&pi, &dq, &[0.0, 0.0]).unwrap(), Vector::from_column_slice(&[0.0, 1.0]));
        assert_eq!(anchor(&PoissonStructure::zero(2), &dq, &[0.0, 0.0]).unwrap().amax(), 0.0);
    }

    #[test]
    fn anchor_matches_defining_pairing() {
        let pi = PoissonStructure::lie_poisson(&LieAlgebra::sl2());
        let x = [0.2, -0.7, 1.1];
        let psi = Covector::from_column_slice(&[0.5, 1.0, -2.0]);
        let phi = Covector::from_column_slice(&[-1.0, 0.3, 0.8]);
        let lhs = phi.dot(&anchor(&pi, &psi, &x).unwrap());
        assert!((lhs - pi.pair(&psi, &phi, &x).unwrap()).abs() < 1e-14);
        assert!(psi.dot(&anchor(&pi, &psi, &x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn so3_lie_poisson_brackets_linear_functions() {
        let pi = PoissonStructure::lie_poisson(&LieAlgebra::so3());
        let c = pi.chart().clone();
        let l1 = ScalarField::coordinate(c.clone(), 0);
        let l2 = ScalarField::coordinate(c, 1);
        assert_eq!(bracket_fn(&pi, &l1, &l2, &[1.0, 2.0, 3.0]).unwrap(), 3.0);
        assert_eq!(bracket_fn(&pi, &l1, &l2, &[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn jacobi_detects_broken_structures() {
        let points = pts(3, 20, 1);
        let sym = PoissonStructure::constant_symplectic(2);
        assert!(jacobi_residual_pts(&sym, &pts(4, 5, 2)).unwrap() < 1e-8);
        for name in LieAlgebra::catalog_names() {
            let g = LieAlgebra::by_name(name).unwrap();
            let r = jacobi_residual_pts(&PoissonStructure::lie_poisson(&g), &points).unwrap();
            assert!(r < 1e-7, "{name}");
        }
        let broken = PoissonStructure::lie_poisson(&LieAlgebra::broken());
        assert!(jacobi_residual_pts(&broken, &points).unwrap() > 0.1);
        let x1 = |c: f64, p: [u32; 3]| Monomial { coef: c, powers: p.to_vec() };
        let bad = PoissonStructure::polynomial(
            "x1",
            3,
            vec![(0, 1, vec![x1(1.0, [1, 0, 0])]), (0, 2, vec![x1(1.0, [0, 0, 0])])],
        )
        .unwrap();
        let r = jacobi_residual_pts(&bad, &points).unwrap();
        assert!((r - 1.0).abs() < 1e-8, "{r}");
    }

    #[test]
    fn polynomial_rejects_diagonal_entries() {
        assert!(PoissonStructure::polynomial("d", 2, vec![(1, 1, vec![])]).is_err());
    }

    #[test]
    fn product_and_reversal() {
        let a = PoissonStructure::constant_symplectic(1);
        let p = PoissonStructure::product(vec![a.reversed(), a.clone()]);
        let m = p.eval(&[0.0; 4]);
        assert_eq!(m[(0, 1)], -1.0);
        assert_eq!(m[(2, 3)], 1.0);
        assert_eq!(m[(0, 3)], 0.0);
    }
}
