use rand::{Rng, RngCore};

use super::{multiply, sample_composable_with, Groupoid, SharedGroupoid};
use crate::numcore::{null_space, Matrix, Vector};
use crate::tolerances::{COMPOSABLE_LIFTED, FD_STEP_NESTED};
use crate::{Error, Result};

/// Central difference of a fallible map along `v`.
pub(crate) fn dir_deriv(
    f: impl Fn(&[f64]) -> Result<Vector>,
    x: &[f64],
    v: &[f64],
    step: f64,
) -> Result<Vector> {
    let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + step * b).collect();
    let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - step * b).collect();
    let d = (f(&plus)? - f(&minus)?) / (2.0 * step);
    crate::numcore::ensure_finite(x, d.as_slice(), "groupoid map derivative")?;
    Ok(d)
}

/// Jacobian of a fallible map, `jac[(i, j)] = ∂_j f_i`.
pub(crate) fn jac(f: impl Fn(&[f64]) -> Result<Vector>, x: &[f64], out_dim: usize, step: f64) -> Result<Matrix> {
    let mut m = Matrix::zeros(out_dim, x.len());
    let mut e = vec![0.0; x.len()];
    for j in 0..x.len() {
        e[j] = 1.0;
        m.set_column(j, &dir_deriv(&f, x, &e, step)?);
        e[j] = 0.0;
    }
    Ok(m)
}

fn moved(x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(v).map(|(a, b)| a + t * b).collect()
}

/// `(α(g), Tα(ξ))`
pub fn tangent_source(grp: &dyn Groupoid, g: &[f64], xi: &[f64]) -> Result<(Vector, Vector)> {
    Ok((grp.source(g)?, dir_deriv(|p| grp.source(p), g, xi, grp.diff_step())?))
}

/// `(β(g), Tβ(ξ))`
pub fn tangent_target(grp: &dyn Groupoid, g: &[f64], xi: &[f64]) -> Result<(Vector, Vector)> {
    Ok((grp.target(g)?, dir_deriv(|p| grp.target(p), g, xi, grp.diff_step())?))
}

/// `(1_m, T1(v))`
pub fn tangent_identity(grp: &dyn Groupoid, m: &[f64], v: &[f64]) -> Result<(Vector, Vector)> {
    if m.is_empty() {
        return Ok((grp.identity(m)?, Vector::zeros(grp.arrow_dim())));
    }
    Ok((grp.identity(m)?, dir_deriv(|p| grp.identity(p), m, v, grp.diff_step())?))
}

/// `(g⁻¹, T(inv)(ξ))`
pub fn tangent_inverse(grp: &dyn Groupoid, g: &[f64], xi: &[f64]) -> Result<(Vector, Vector)> {
    Ok((grp.inverse(g)?, dir_deriv(|p| grp.inverse(p), g, xi, grp.diff_step())?))
}

/// Derivative of `t ↦ with_source(h + tη, m + tv)`.
pub fn tangent_with_source(
    grp: &dyn Groupoid,
    h: &[f64],
    eta: &[f64],
    m: &[f64],
    v: &[f64],
) -> Result<(Vector, Vector)> {
    let step = grp.diff_step();
    let curve = |t: f64| grp.with_source(&moved(h, eta, t), &moved(m, v, t));
    let vel = (curve(step)? - curve(-step)?) / (2.0 * step);
    Ok((grp.with_source(h, m)?, vel))
}

/// `η • ξ`: derivative of `t ↦ h_t g_t` with `g_t = g + tξ` and
/// `h_t = with_source(h + tη, β(g_t))`, which keeps the pair composable along the curve.
pub fn tangent_compose(
    grp: &dyn Groupoid,
    h: &[f64],
    eta: &[f64],
    g: &[f64],
    xi: &[f64],
) -> Result<(Vector, Vector)> {
    let step = grp.diff_step();
    let curve = |t: f64| -> Result<Vector> {
        let gt = moved(g, xi, t);
        let ht = grp.with_source(&moved(h, eta, t), grp.target(&gt)?.as_slice())?;
        grp.compose(ht.as_slice(), &gt)
    };
    let vel = (curve(step)? - curve(-step)?) / (2.0 * step);
    crate::numcore::ensure_finite(g, vel.as_slice(), "tangent product")?;
    Ok((grp.compose(h, g)?, vel))
}

fn split(x: &[f64], at: usize) -> (&[f64], &[f64]) {
    x.split_at(at)
}

fn join(a: Vector, b: Vector) -> Vector {
    Vector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

/// Tangent groupoid `T𝒢 ⇒ TM` with arrows `(g, ξ)` and base points `(m, v)`.
#[derive(Clone)]
pub struct TangentLift {
    parent: SharedGroupoid,
}

impl TangentLift {
    pub fn new(parent: SharedGroupoid) -> Self {
        Self { parent }
    }

    pub fn parent(&self) -> &SharedGroupoid {
        &self.parent
    }

    fn n(&self) -> usize {
        self.parent.arrow_dim()
    }

    fn m(&self) -> usize {
        self.parent.base_dim()
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
}

impl Groupoid for TangentLift {
    fn name(&self) -> String {
        format!("tangent-lift({})", self.parent.name())
    }

    fn arrow_dim(&self) -> usize {
        2 * self.n()
    }

    fn base_dim(&self) -> usize {
        2 * self.m()
    }

    fn source(&self, g: &[f64]) -> Result<Vector> {
        self.check(g, self.arrow_dim())?;
        let (p, v) = split(g, self.n());
        let (a, b) = tangent_source(self.parent.as_ref(), p, v)?;
        Ok(join(a, b))
    }

    fn target(&self, g: &[f64]) -> Result<Vector> {
        self.check(g, self.arrow_dim())?;
        let (p, v) = split(g, self.n());
        let (a, b) = tangent_target(self.parent.as_ref(), p, v)?;
        Ok(join(a, b))
    }

    fn identity(&self, m: &[f64]) -> Result<Vector> {
        self.check(m, self.base_dim())?;
        let (p, v) = split(m, self.m());
        let (a, b) = tangent_identity(self.parent.as_ref(), p, v)?;
        Ok(join(a, b))
    }

    fn inverse(&self, g: &[f64]) -> Result<Vector> {
        self.check(g, self.arrow_dim())?;
        let (p, v) = split(g, self.n());
        let (a, b) = tangent_inverse(self.parent.as_ref(), p, v)?;
        Ok(join(a, b))
    }

    fn compose(&self, h: &[f64], g: &[f64]) -> Result<Vector> {
        self.check(h, self.arrow_dim())?;
        self.check(g, self.arrow_dim())?;
        let (hp, hv) = split(h, self.n());
        let (gp, gv) = split(g, self.n());
        let (a, b) = tangent_compose(self.parent.as_ref(), hp, hv, gp, gv)?;
        Ok(join(a, b))
    }

    fn with_source(&self, h: &[f64], m: &[f64]) -> Result<Vector> {
        self.check(h, self.arrow_dim())?;
        self.check(m, self.base_dim())?;
        let (hp, hv) = split(h, self.n());
        let (mp, mv) = split(m, self.m());
        let (a, b) = tangent_with_source(self.parent.as_ref(), hp, hv, mp, mv)?;
        Ok(join(a, b))
    }

    fn sample_arrow(&self, rng: &mut dyn RngCore) -> Vector {
        let g = self.parent.sample_arrow(rng);
        let v = Vector::from_fn(self.n(), |_, _| rng.gen_range(-1.0..1.0));
        join(g, v)
    }

    fn composable_tolerance(&self) -> f64 {
        COMPOSABLE_LIFTED
    }

    fn diff_step(&self) -> f64 {
        FD_STEP_NESTED
    }
}

/// Max over samples of `‖(ξ₄+ξ₃)•(ξ₂+ξ₁) − (ξ₄•ξ₂ + ξ₃•ξ₁)‖∞` with `ξ₄, ξ₃ ∈ T_h𝒢`,
/// `ξ₂, ξ₁ ∈ T_g𝒢` and both products composable.
pub fn interchange_residual(parent: &SharedGroupoid, rng: &mut dyn RngCore, count: usize) -> Result<f64> {
    let lift = TangentLift::new(parent.clone());
    let n = parent.arrow_dim();
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let a = lift.sample_arrow(rng);
        let b = join(
            Vector::from_column_slice(&a.as_slice()[..n]),
            Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)),
        );
        let c = sample_composable_with(&lift, a.as_slice(), rng)?;
        let free = join(
            Vector::from_column_slice(&c.as_slice()[..n]),
            Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)),
        );
        let d = lift.with_source(free.as_slice(), lift.target(b.as_slice())?.as_slice())?;
        let (xi2, xi1) = (&a.as_slice()[n..], &b.as_slice()[n..]);
        let (xi4, xi3) = (&c.as_slice()[n..], &d.as_slice()[n..]);
        if (&c.as_slice()[..n]).iter().zip(&d.as_slice()[..n]).any(|(p, q)| (p - q).abs() > 1e-12) {
            return Err(Error::Sampler("interchange sampler moved the base arrow".into()));
        }
        let g = &a.as_slice()[..n];
        let h = &c.as_slice()[..n];
        let sum_h: Vec<f64> = xi4.iter().zip(xi3).map(|(p, q)| p + q).collect();
        let sum_g: Vec<f64> = xi2.iter().zip(xi1).map(|(p, q)| p + q).collect();
        let lhs = multiply(&lift, join_slices(h, &sum_h).as_slice(), join_slices(g, &sum_g).as_slice())?;
        let p42 = multiply(&lift, c.as_slice(), a.as_slice())?;
        let p31 = multiply(&lift, d.as_slice(), b.as_slice())?;
        let rhs = &p42.as_slice()[n..];
        let rhs: Vec<f64> = rhs.iter().zip(&p31.as_slice()[n..]).map(|(p, q)| p + q).collect();
        let res = lhs.as_slice()[n..]
            .iter()
            .zip(&rhs)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        worst = worst.max(res);
    }
    Ok(worst)
}

fn join_slices(a: &[f64], b: &[f64]) -> Vector {
    Vector::from_iterator(a.len() + b.len(), a.iter().chain(b).copied())
}

/// For `η ∈ ker Tα` at `h` and `ξ ∈ ker Tβ` at `g`, max over samples of
/// `‖η•ξ − (T(L_h)ξ + T(R_g)η)‖∞`, with `T(L_h)ξ = 0̃_h•ξ` and `T(R_g)η = η•0̃_g`.
pub fn lemma_translation_residual(parent: &dyn Groupoid, rng: &mut dyn RngCore, count: usize) -> Result<f64> {
    let n = parent.arrow_dim();
    let m = parent.base_dim();
    let step = parent.diff_step();
    let mut worst: f64 = 0.0;
    let zero = vec![0.0; n];
    for _ in 0..count {
        let g = parent.sample_arrow(rng);
        let h = sample_composable_with(parent, g.as_slice(), rng)?;
        let kernel_sample = |x: &[f64], f: &dyn Fn(&[f64]) -> Result<Vector>, rng: &mut dyn RngCore| -> Result<Vector> {
            let basis = if m == 0 {
                Matrix::identity(n, n)
            } else {
                null_space(&jac(f, x, m, step)?, 1e-8)
            };
            let c = Vector::from_fn(basis.ncols(), |_, _| rng.gen_range(-1.0..1.0));
            Ok(basis * c)
        };
        let eta = kernel_sample(h.as_slice(), &|p| parent.source(p), rng)?;
        let xi = kernel_sample(g.as_slice(), &|p| parent.target(p), rng)?;
        let (_, prod) = tangent_compose(parent, h.as_slice(), eta.as_slice(), g.as_slice(), xi.as_slice())?;
        let (_, left) = tangent_compose(parent, h.as_slice(), &zero, g.as_slice(), xi.as_slice())?;
        let (_, right) = tangent_compose(parent, h.as_slice(), eta.as_slice(), g.as_slice(), &zero)?;
        worst = worst.max((prod - left - right).amax());
    }
    Ok(worst)
}
