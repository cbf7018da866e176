//! Finite-dimensional Lie algebras given by structure constants.
//!
//! `[e_i, e_j] = Σ_k c^k_ij e_k`. Covectors are expressed in the dual basis
//! `ε^i` and pair with vectors by `⟨φ, X⟩ = Σ φ_i X_i`.

mod bialgebra;
mod multivector;

use serde::{Deserialize, Serialize};

pub use bialgebra::{
    bialgebra_residual, ce_differential, coboundary_dual, drinfeld_double, pairing_invariance_residual,
    schouten, LieBialgebra,
};
pub use multivector::Multivector;

use crate::numcore::{self, Matrix, Vector};
use crate::{Error, Result};

/// Element of a Lie algebra in its basis.
pub type AlgVector = Vector;
/// Element of the dual of a Lie algebra in the dual basis.
pub type AlgCovector = Vector;

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    dim: usize,
    // c[(k * dim + i) * dim + j] = c^k_ij
    constants: Vec<f64>,
}

impl LieAlgebra {
    /// Zero (abelian) algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        Self {
            name: format!("abelian{dim}"),
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            dim,
            constants: vec![0.0; dim * dim * dim],
        }
    }

    /// Builds an algebra from `(i, j, k, value)` entries meaning `c^k_ij = value`
    /// (zero-based). The loader completes antisymmetry with `c^k_ji = −value`;
    /// conflicting or diagonal entries are rejected.
    pub fn from_triples(
        name: impl Into<String>,
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        let mut alg = Self::abelian(dim);
        alg.name = name.into();
        let mut seen = vec![false; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Config(format!(
                    "structure constant index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::Config(format!(
                        "diagonal constant c^{k}_{i}{i} must vanish"
                    )));
                }
                continue;
            }
            let (a, b) = (alg.idx(k, i, j), alg.idx(k, j, i));
            if (seen[a] && alg.constants[a] != v) || (seen[b] && alg.constants[b] != -v) {
                return Err(Error::Config(format!(
                    "conflicting entries for c^{k}_{i}{j}"
                )));
            }
            alg.constants[a] = v;
            alg.constants[b] = -v;
            seen[a] = true;
            seen[b] = true;
        }
        Ok(alg)
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    /// so(3): `[e1,e2] = e3`, `[e2,e3] = e1`, `[e3,e1] = e2`.
    pub fn so3() -> Self {
        Self::from_triples("so3", 3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
            .expect("catalog constants")
    }

    /// sl(2,ℝ) in the basis (h, e, f): `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        Self::from_triples("sl2", 3, &[(0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)])
            .expect("catalog constants")
            .with_labels(&["h", "e", "f"])
    }

    /// Heisenberg algebra h₃: `[e1, e2] = e3`, `e3` central.
    pub fn heisenberg() -> Self {
        Self::from_triples("h3", 3, &[(0, 1, 2, 1.0)]).expect("catalog constants")
    }

    /// Antisymmetric constants that violate Jacobi:
    /// `[e1,e2] = e3`, `[e2,e3] = e1`, `[e3,e1] = e1`.
    pub fn broken() -> Self {
        Self::from_triples("broken", 3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 0, 1.0)])
            .expect("catalog constants")
    }

    /// Catalog lookup: `so3`, `sl2`, `h3`, `broken`, `abelian<n>`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "so3" => Ok(Self::so3()),
            "sl2" => Ok(Self::sl2()),
            "h3" | "heisenberg" => Ok(Self::heisenberg()),
            "broken" => Ok(Self::broken()),
            _ => name
                .strip_prefix("abelian")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| *n >= 1)
                .map(Self::abelian)
                .ok_or_else(|| Error::Unknown {
                    kind: "algebra",
                    name: name.to_string(),
                }),
        }
    }

    /// Catalog names in listing order.
    pub fn catalog_names() -> &'static [&'static str] {
        &["abelian3", "h3", "sl2", "so3"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.dim + i) * self.dim + j
    }

    /// `c^k_ij`.
    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.constants[self.idx(k, i, j)]
    }

    pub fn basis(&self, i: usize) -> AlgVector {
        let mut v = AlgVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        }
    }

    /// `[X, Y]_k = Σ_{i,j} c^k_ij X_i Y_j`.
    pub fn bracket(&self, x: &AlgVector, y: &AlgVector) -> Result<AlgVector> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &AlgVector, y: &AlgVector) -> AlgVector {
        let n = self.dim;
        AlgVector::from_fn(n, |k, _| {
            let mut acc = 0.0;
            for i in 0..n {
                if x[i] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    acc += self.constant(k, i, j) * x[i] * y[j];
                }
            }
            acc
        })
    }

    /// Matrix of `ad_X` in the basis.
    pub fn ad_matrix(&self, x: &AlgVector) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, j| (0..n).map(|i| self.constant(k, i, j) * x[i]).sum())
    }

    /// Largest `|c^k_ij + c^k_ji|`; zero for any algebra built by this module.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((self.constant(k, i, j) + self.constant(k, j, i)).abs());
                }
            }
        }
        worst
    }

    /// Max over basis triples of `‖[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]‖∞`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
                    let cyc = self.bracket_unchecked(&self.bracket_unchecked(&ei, &ej), &ek)
                        + self.bracket_unchecked(&self.bracket_unchecked(&ej, &ek), &ei)
                        + self.bracket_unchecked(&self.bracket_unchecked(&ek, &ei), &ej);
                    worst = worst.max(cyc.amax());
                }
            }
        }
        worst
    }

    /// `ad*_X φ`, defined by `⟨ad*_X φ, Y⟩ = −⟨φ, [X, Y]⟩`.
    pub fn coadjoint_inf(&self, x: &AlgVector, phi: &AlgCovector) -> Result<AlgCovector> {
        self.check_dim(x)?;
        self.check_dim(phi)?;
        Ok(-(self.ad_matrix(x).transpose() * phi))
    }

    /// The algebra with the opposite bracket, `c^k_ij ↦ −c^k_ij`.
    pub fn opposite(&self) -> Self {
        Self {
            name: format!("{}-op", self.name),
            labels: self.labels.clone(),
            dim: self.dim,
            constants: self.constants.iter().map(|c| -c).collect(),
        }
    }

    /// Structure constants in the basis `e'_j = Σ_i T_ij e_i`.
    pub fn change_basis(&self, t: &Matrix) -> Result<Self> {
        let n = self.dim;
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.nrows(),
            });
        }
        let t_inv = numcore::inverse(t)?;
        let mut out = Self::abelian(n);
        out.name = self.name.clone();
        out.labels = (1..=n).map(|i| format!("e'{i}")).collect();
        for a in 0..n {
            for b in 0..n {
                let br = self.bracket_unchecked(&t.column(a).into_owned(), &t.column(b).into_owned());
                let coords = &t_inv * br;
                for k in 0..n {
                    let idx = out.idx(k, a, b);
                    out.constants[idx] = coords[k];
                }
            }
        }
        Ok(out)
    }
}

/// Serialized form used by configuration files: 1-based indices `[i, j, k, value]`
/// for `c^k_ij`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDef {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub constants: Vec<[f64; 4]>,
}

impl AlgebraDef {
    pub fn build(&self) -> Result<LieAlgebra> {
        if self.dim == 0 {
            return Err(Error::Config(format!("algebra `{}` has dimension 0", self.name)));
        }
        let mut entries = Vec::with_capacity(self.constants.len());
        for row in &self.constants {
            let mut idx = [0usize; 3];
            for (slot, v) in idx.iter_mut().zip(&row[..3]) {
                if v.fract() != 0.0 || *v < 1.0 {
                    return Err(Error::Config(format!(
                        "algebra `{}`: index {v} is not a positive integer",
                        self.name
                    )));
                }
                *slot = *v as usize - 1;
            }
            entries.push((idx[0], idx[1], idx[2], row[3]));
        }
        LieAlgebra::from_triples(self.name.clone(), self.dim, &entries)
    }
}
