use super::{bracket_fn, PoissonStructure, Tensor};
use crate::numcore::{diff_directional, gradient, Chart, DiffMode, ScalarField, Vector};
use crate::tolerances::FD_STEP_NESTED;
use crate::Result;

/// Poisson structure on `TP` in coordinates `(x, v)`:
/// `Π = [[0, π(x)], [π(x), Dπ(x)[v]]]`.
///
/// The block form is what the identities `{ℓ_{df₁}, ℓ_{df₂}} = ℓ_{d{f₁,f₂}}`,
/// `{ℓ_{df₁}, p*f₂} = p*{f₁,f₂}` and `{p*f₁, p*f₂} = 0` force on coordinate
/// functions, where `ℓ_{df}(x, v) = df_x(v)`; [`courant_residuals`] checks them.
pub fn tangent_lift(pi: &PoissonStructure) -> PoissonStructure {
    PoissonStructure {
        chart: Chart::new(2 * pi.dim(), format!("T({})", pi.chart().label())),
        name: format!("tangent-lift {}", pi.name()),
        tensor: Tensor::Lift(Box::new(pi.clone())),
    }
}

/// `ℓ_{df}(x, v) = ⟨df_x, v⟩` on `TP`.
pub fn linear_lift(f: &ScalarField) -> ScalarField {
    let n = f.chart().dim();
    let f = f.clone();
    ScalarField::black_box(Chart::new(2 * n, "TP"), move |xv| {
        let (x, v) = xv.split_at(n);
        diff_directional(&f, x, v, DiffMode::default()).unwrap_or(f64::NAN)
    })
}

/// `p*f(x, v) = f(x)` on `TP`.
pub fn pullback(f: &ScalarField) -> ScalarField {
    let n = f.chart().dim();
    let f = f.clone();
    ScalarField::black_box(Chart::new(2 * n, "TP"), move |xv| f.eval(&xv[..n]))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CourantResiduals {
    pub linear_linear: f64,
    pub linear_pullback: f64,
    pub pullback_pullback: f64,
}

impl CourantResiduals {
    pub fn max(&self) -> f64 {
        self.linear_linear.max(self.linear_pullback).max(self.pullback_pullback)
    }
}

fn nested_gradient(f: &ScalarField, x: &[f64]) -> Result<Vector> {
    gradient(f, x, DiffMode::Central { step: FD_STEP_NESTED })
}

fn lifted_bracket(lift: &PoissonStructure, a: &ScalarField, b: &ScalarField, xv: &[f64]) -> Result<f64> {
    let da = nested_gradient(a, xv)?;
    let db = nested_gradient(b, xv)?;
    Ok(da.dot(&(lift.eval(xv) * db)))
}

/// Residuals of the three defining identities of the lift for the pair
/// `(f₁, f₂)` at points `(x, v)` of `TP`.
pub fn courant_residuals(
    pi: &PoissonStructure,
    lift: &PoissonStructure,
    f1: &ScalarField,
    f2: &ScalarField,
    points: &[Vector],
) -> Result<CourantResiduals> {
    let n = pi.dim();
    let (l1, l2) = (linear_lift(f1), linear_lift(f2));
    let (p1, p2) = (pullback(f1), pullback(f2));
    let (pp, a, b) = (pi.clone(), f1.clone(), f2.clone());
    let f12 = ScalarField::black_box(pi.chart().clone(), move |x| {
        bracket_fn(&pp, &a, &b, x).unwrap_or(f64::NAN)
    });
    let mut out = CourantResiduals::default();
    for xv in points {
        let xv = xv.as_slice();
        let (x, v) = xv.split_at(n);
        let ll = lifted_bracket(lift, &l1, &l2, xv)?;
        let expected = diff_directional(&f12, x, v, DiffMode::Central { step: FD_STEP_NESTED })?;
        out.linear_linear = out.linear_linear.max((ll - expected).abs());

        let lp = lifted_bracket(lift, &l1, &p2, xv)?;
        out.linear_pullback = out.linear_pullback.max((lp - f12.eval(x)).abs());

        let pp = lifted_bracket(lift, &p1, &p2, xv)?;
        out.pullback_pullback = out.pullback_pullback.max(pp.abs());
    }
    Ok(out)
}
