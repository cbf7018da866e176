use std::fmt;

use crate::numcore::Vector;
use crate::{Error, Result};

/// Element of `⋀^k ℝⁿ` for `k ≤ 3`, stored on the basis `e_I = e_{i₁}∧…∧e_{i_k}`
/// with `i₁ < … < i_k` in lexicographic order.
///
/// The pairing with `ε^{i₁}∧…∧ε^{i_k}` reads off the component of `e_I`, so
/// `(X∧Y)^{ij} = X_i Y_j − X_j Y_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

pub const MAX_DEGREE: usize = 3;

/// Increasing index tuples of length `degree` in lexicographic order.
pub fn basis_indices(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, degree: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == degree {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, degree, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, 0, &mut Vec::new(), &mut out);
    out
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for a in 0..idx.len() {
        for b in 0..idx.len() - 1 - a {
            if idx[b] > idx[b + 1] {
                idx.swap(b, b + 1);
                sign = -sign;
            } else if idx[b] == idx[b + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl Multivector {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(format!(
                "multivectors are implemented up to degree {MAX_DEGREE}, got {degree}"
            )));
        }
        let len = basis_indices(dim, degree).len();
        Ok(Self {
            dim,
            degree,
            coeffs: vec![0.0; len],
        })
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self {
            dim,
            degree: 0,
            coeffs: vec![value],
        }
    }

    pub fn from_vector(v: &Vector) -> Self {
        Self {
            dim: v.len(),
            degree: 1,
            coeffs: v.iter().copied().collect(),
        }
    }

    /// `e_{i₁}∧…∧e_{i_k}` for arbitrary (possibly unsorted) indices.
    pub fn basis_blade(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut m = Self::zero(dim, indices.len())?;
        m.add_blade(indices, 1.0);
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from_column_slice(&self.coeffs)
    }

    fn position(&self, sorted: &[usize]) -> usize {
        // rank of a sorted tuple in lexicographic order of increasing tuples
        let n = self.dim;
        let k = sorted.len();
        let mut pos = 0;
        let mut start = 0;
        for (slot, &i) in sorted.iter().enumerate() {
            for skipped in start..i {
                pos += binom(n - skipped - 1, k - slot - 1);
            }
            start = i + 1;
        }
        pos
    }

    /// Component on `e_{i₁}∧…∧e_{i_k}` with the permutation sign applied.
    pub fn component(&self, indices: &[usize]) -> f64 {
        assert_eq!(indices.len(), self.degree);
        let mut idx = indices.to_vec();
        match sort_sign(&mut idx) {
            Some(sign) => sign * self.coeffs[self.position(&idx)],
            None => 0.0,
        }
    }

    /// Adds `value · e_{i₁}∧…∧e_{i_k}`.
    pub fn add_blade(&mut self, indices: &[usize], value: f64) {
        assert_eq!(indices.len(), self.degree);
        let mut idx = indices.to_vec();
        if let Some(sign) = sort_sign(&mut idx) {
            let p = self.position(&idx);
            self.coeffs[p] += sign * value;
        }
    }

    /// Iterates `(indices, coefficient)` over the canonical basis.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        basis_indices(self.dim, self.degree)
            .into_iter()
            .zip(self.coeffs.iter().copied())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::UnsupportedDegree(format!(
                "cannot add degree {} to degree {}",
                other.degree, self.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Exterior product; the total degree must stay within the cap.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree)?;
        for (i, a) in self.terms() {
            if a == 0.0 {
                continue;
            }
            for (j, b) in other.terms() {
                if b == 0.0 {
                    continue;
                }
                let blade: Vec<usize> = i.iter().chain(&j).copied().collect();
                out.add_blade(&blade, a * b);
            }
        }
        Ok(out)
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let blade: Vec<String> = idx.iter().map(|i| format!("e{}", i + 1)).collect();
            if blade.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·{}", blade.join("∧"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
