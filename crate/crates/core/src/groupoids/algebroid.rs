use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tangent::{dir_deriv, jac, tangent_compose};
use super::SharedGroupoid;
use crate::numcore::{least_squares, Matrix, Vector};
use crate::tolerances::FD_STEP_NESTED;
use crate::{Error, Result};

/// Lie algebroid `A𝒢 = ker Tα|_M` of a groupoid, with a frame obtained by
/// projecting fixed coordinate directions at `1_m` onto `ker Tα` along the
/// identity section.
#[derive(Clone)]
pub struct Algebroid {
    grp: SharedGroupoid,
    indices: Vec<usize>,
}

/// Linear data of the algebroid at one base point.
#[derive(Clone, Debug)]
pub struct AlgebroidAt {
    pub base_point: Vector,
    pub identity_arrow: Vector,
    /// `T1` at `m`, `N × M`.
    pub identity_tangent: Matrix,
    /// `Tα` at `1_m`, `M × N`.
    pub source_jacobian: Matrix,
    /// `P = I − T1·Tα`, the projection of `T_{1_m}𝒢` onto `A_m`.
    pub projection: Matrix,
    /// Columns `b_k = P e_{j_k}`.
    pub frame: Matrix,
    /// Columns `a(b_k) = Tβ(b_k)`.
    pub anchor: Matrix,
}

impl AlgebroidAt {
    pub fn rank(&self) -> usize {
        self.frame.ncols()
    }

    /// Frame coordinates of a vector in `A_m`, with the least-squares residual.
    pub fn coords(&self, x: &Vector) -> Result<(Vector, f64)> {
        least_squares(&self.frame, x)
    }

    /// `(1̃-part, A-part)` of `ζ ∈ T_{1_m}𝒢`: `ζ = T1(Tα ζ) + Pζ`.
    pub fn split(&self, zeta: &Vector) -> (Vector, Vector) {
        (&self.source_jacobian * zeta, &self.projection * zeta)
    }
}

impl Algebroid {
    pub fn new(grp: SharedGroupoid) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let reference = grp.source(grp.sample_arrow(&mut rng).as_slice())?;
        let mut out = Self {
            grp,
            indices: Vec::new(),
        };
        let data = out.linear_data(reference.as_slice())?;
        out.indices = greedy_columns(&data.projection, out.grp.arrow_dim() - out.grp.base_dim())?;
        Ok(out)
    }

    pub fn groupoid(&self) -> &SharedGroupoid {
        &self.grp
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    fn linear_data(&self, m: &[f64]) -> Result<AlgebroidAt> {
        let grp = self.grp.as_ref();
        let (n, k) = (grp.arrow_dim(), grp.base_dim());
        let step = grp.diff_step();
        let one = grp.identity(m)?;
        let d1 = if k == 0 {
            Matrix::zeros(n, 0)
        } else {
            jac(|p| grp.identity(p), m, n, step)?
        };
        let da = if k == 0 {
            Matrix::zeros(0, n)
        } else {
            jac(|p| grp.source(p), one.as_slice(), k, step)?
        };
        let db = if k == 0 {
            Matrix::zeros(0, n)
        } else {
            jac(|p| grp.target(p), one.as_slice(), k, step)?
        };
        let projection = Matrix::identity(n, n) - &d1 * &da;
        let frame = Matrix::from_fn(n, self.indices.len(), |i, c| projection[(i, self.indices[c])]);
        let anchor = &db * &frame;
        Ok(AlgebroidAt {
            base_point: Vector::from_column_slice(m),
            identity_arrow: one,
            identity_tangent: d1,
            source_jacobian: da,
            projection,
            frame,
            anchor,
        })
    }

    pub fn at(&self, m: &[f64]) -> Result<AlgebroidAt> {
        if m.len() != self.grp.base_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.grp.base_dim(),
                got: m.len(),
            });
        }
        self.linear_data(m)
    }

    /// Right-invariant extension `→X(g) = T(R_g)(X(βg)) = X(βg) • 0̃_g` of a
    /// section given by its frame coefficients.
    pub fn right_invariant(&self, section: &dyn Fn(&[f64]) -> Result<Vector>, g: &[f64]) -> Result<Vector> {
        let grp = self.grp.as_ref();
        let m = grp.target(g)?;
        let data = self.at(m.as_slice())?;
        let x = &data.frame * section(m.as_slice())?;
        let zero = vec![0.0; grp.arrow_dim()];
        let (_, vel) = tangent_compose(grp, data.identity_arrow.as_slice(), x.as_slice(), g, &zero)?;
        Ok(vel)
    }

    /// Frame coefficients of `[X, Y]` at `m`, computed as the chart bracket of
    /// the right-invariant extensions at `1_m`.
    pub fn bracket(
        &self,
        x: &dyn Fn(&[f64]) -> Result<Vector>,
        y: &dyn Fn(&[f64]) -> Result<Vector>,
        m: &[f64],
    ) -> Result<Vector> {
        let data = self.at(m)?;
        let one = data.identity_arrow.as_slice();
        let xr = self.right_invariant(x, one)?;
        let yr = self.right_invariant(y, one)?;
        let dy = dir_deriv(|p| self.right_invariant(y, p), one, xr.as_slice(), FD_STEP_NESTED)?;
        let dx = dir_deriv(|p| self.right_invariant(x, p), one, yr.as_slice(), FD_STEP_NESTED)?;
        let (c, _) = data.coords(&(dy - dx))?;
        Ok(c)
    }

    /// `C[k][(i, j)]` with `[b_i, b_j] = Σ_k C^k_ij b_k` for the frame sections.
    pub fn bracket_table(&self, m: &[f64]) -> Result<Vec<Matrix>> {
        let r = self.rank();
        let mut table = vec![Matrix::zeros(r, r); r];
        for i in 0..r {
            for j in (i + 1)..r {
                let ei = move |_: &[f64]| -> Result<Vector> { Ok(unit(r, i)) };
                let ej = move |_: &[f64]| -> Result<Vector> { Ok(unit(r, j)) };
                let c = self.bracket(&ei, &ej, m)?;
                for k in 0..r {
                    table[k][(i, j)] = c[k];
                    table[k][(j, i)] = -c[k];
                }
            }
        }
        Ok(table)
    }
}

fn unit(r: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(r);
    v[i] = 1.0;
    v
}

/// Column indices whose columns are independent, chosen greedily by the norm
/// left after removing the span of the previous picks, in ascending order.
fn greedy_columns(p: &Matrix, want: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    for _ in 0..want {
        let residual = |j: usize| -> Vector {
            let mut v = p.column(j).into_owned();
            for q in &basis {
                let c = q.dot(&v);
                v -= q * c;
            }
            v
        };
        let norms: Vec<f64> = (0..p.ncols()).map(|j| residual(j).norm()).collect();
        let best = norms.iter().cloned().fold(0.0, f64::max);
        if best < 1e-8 {
            return Err(Error::RankDeficiency {
                expected: want,
                found: chosen.len(),
            });
        }
        let j = (0..p.ncols())
            .find(|&j| !chosen.contains(&j) && norms[j] >= best * (1.0 - 1e-9))
            .expect("a maximizer exists");
        let v = residual(j);
        basis.push(&v / v.norm());
        chosen.push(j);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Frame, anchor and identity-section data of `A𝒢` at `m`.
pub fn algebroid_extract(grp: SharedGroupoid, m: &[f64]) -> Result<AlgebroidAt> {
    Algebroid::new(grp)?.at(m)
}
