use super::dual::Dual;
use super::fields::{OneFormField, ScalarField, VectorField};
use super::{ensure_finite, Covector, Matrix, Vector};
use crate::{Error, Result};

/// How a directional derivative of a scalar field is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffMode {
    /// Symmetric difference quotient with the given step.
    Central { step: f64 },
    /// Forward-mode dual numbers; exact for fields built from primitives.
    Dual,
    /// Dual numbers when the field supports them, central differences otherwise.
    Auto { step: f64 },
}

impl Default for DiffMode {
    fn default() -> Self {
        DiffMode::Auto {
            step: crate::tolerances::FD_STEP,
        }
    }
}

/// `⟨df(x), v⟩`.
pub fn diff_directional(f: &ScalarField, x: &[f64], v: &[f64], mode: DiffMode) -> Result<f64> {
    if x.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: v.len(),
        });
    }
    let value = match mode {
        DiffMode::Central { step } => central_scalar(f, x, v, step),
        DiffMode::Dual => dual_scalar(f, x, v)?,
        DiffMode::Auto { step } => {
            if f.has_dual() {
                dual_scalar(f, x, v)?
            } else {
                central_scalar(f, x, v, step)
            }
        }
    };
    ensure_finite(x, &[value], "directional derivative")?;
    Ok(value)
}

fn central_scalar(f: &ScalarField, x: &[f64], v: &[f64], h: f64) -> f64 {
    let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + h * b).collect();
    let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - h * b).collect();
    (f.eval(&plus) - f.eval(&minus)) / (2.0 * h)
}

fn dual_scalar(f: &ScalarField, x: &[f64], v: &[f64]) -> Result<f64> {
    let seeded: Vec<Dual> = x.iter().zip(v).map(|(&a, &b)| Dual::new(a, b)).collect();
    f.eval_dual(&seeded)
        .map(|d| d.eps)
        .ok_or(Error::NoDualEvaluation)
}

/// Coordinate gradient `df(x)` as a covector.
pub fn gradient(f: &ScalarField, x: &[f64], mode: DiffMode) -> Result<Covector> {
    let n = x.len();
    let mut out = Covector::zeros(n);
    let mut e = vec![0.0; n];
    for i in 0..n {
        e[i] = 1.0;
        out[i] = diff_directional(f, x, &e, mode)?;
        e[i] = 0.0;
    }
    Ok(out)
}

/// Velocity of a curve at `t0` by central difference.
pub fn curve_velocity(gamma: impl Fn(f64) -> Vector, t0: f64, step: f64) -> Result<Vector> {
    let v = (gamma(t0 + step) - gamma(t0 - step)) / (2.0 * step);
    ensure_finite(&[t0], v.as_slice(), "curve velocity")?;
    Ok(v)
}

/// Directional derivative of a vector-valued map by central difference.
pub fn directional_derivative(
    f: impl Fn(&[f64]) -> Vector,
    x: &[f64],
    v: &[f64],
    step: f64,
) -> Result<Vector> {
    let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + step * b).collect();
    let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - step * b).collect();
    let d = (f(&plus) - f(&minus)) / (2.0 * step);
    ensure_finite(x, d.as_slice(), "directional derivative")?;
    Ok(d)
}

/// Jacobian `∂f_i/∂x_j` by central differences.
pub fn jacobian(f: impl Fn(&[f64]) -> Vector, x: &[f64], step: f64) -> Result<Matrix> {
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        cols.push(directional_derivative(&f, x, &e, step)?);
        e[j] = 0.0;
    }
    if cols.is_empty() {
        return Ok(Matrix::zeros(f(x).len(), 0));
    }
    Ok(Matrix::from_columns(&cols))
}

/// `dλ(v, w)(x) = D_v(λ(w))(x) − D_w(λ(v))(x)` for constant `v`, `w`.
pub fn exterior_d1(form: &OneFormField, x: &[f64], v: &[f64], w: &[f64], step: f64) -> Result<f64> {
    let n = form.chart().dim();
    for len in [x.len(), v.len(), w.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
    }
    let lw = directional_derivative(|p| form.eval(p), x, v, step)?.dot(&Vector::from_column_slice(w));
    let lv = directional_derivative(|p| form.eval(p), x, w, step)?.dot(&Vector::from_column_slice(v));
    Ok(lw - lv)
}

/// Matrix `Ω_ij = dλ(∂_i, ∂_j)(x)`, antisymmetric by construction.
pub fn exterior_d1_matrix(form: &OneFormField, x: &[f64], step: f64) -> Result<Matrix> {
    // jac[(j, i)] = ∂_i λ_j
    let jac = jacobian(|p| form.eval(p), x, step)?;
    Ok(jac.transpose() - jac)
}

/// `(L_X ψ)_i = X^j ∂_j ψ_i + ψ_j ∂_i X^j`.
pub fn lie_derivative_oneform(
    field: &VectorField,
    form: &OneFormField,
    x: &[f64],
    step: f64,
) -> Result<Covector> {
    let xv = field.eval(x);
    let psi = form.eval(x);
    ensure_finite(x, xv.as_slice(), "vector field")?;
    ensure_finite(x, psi.as_slice(), "1-form")?;
    let transport = directional_derivative(|p| form.eval(p), x, xv.as_slice(), step)?;
    // dx[(j, i)] = ∂_i X^j
    let dx = jacobian(|p| field.eval(p), x, step)?;
    Ok(transport + dx.transpose() * psi)
}

/// Bracket of vector fields `[X, Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i`.
pub fn vector_field_bracket(
    a: &VectorField,
    b: &VectorField,
    x: &[f64],
    step: f64,
) -> Result<Vector> {
    let av = a.eval(x);
    let bv = b.eval(x);
    let db_a = directional_derivative(|p| b.eval(p), x, av.as_slice(), step)?;
    let da_b = directional_derivative(|p| a.eval(p), x, bv.as_slice(), step)?;
    Ok(db_a - da_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{Chart, Real, SmoothFn};

    struct Product;
    impl SmoothFn for Product {
        fn eval<S: Real>(&self, x: &[S]) -> S {
            x[0] * x[1]
        }
    }

    struct Sine;
    impl SmoothFn for Sine {
        fn eval<S: Real>(&self, x: &[S]) -> S {
            x[0].sin()
        }
    }

    #[test]
    fn product_rule_by_hand() {
        let f = ScalarField::smooth(Chart::new(2, "r2"), Product);
        for mode in [DiffMode::Dual, DiffMode::Central { step: 1e-5 }] {
            let d = diff_directional(&f, &[1.0, 2.0], &[1.0, 0.0], mode).unwrap();
            assert!((d - 2.0).abs() < 1e-9, "{mode:?}: {d}");
        }
    }

    #[test]
    fn constant_has_zero_derivative() {
        let f = ScalarField::constant(Chart::new(3, "r3"), 4.5);
        let d = diff_directional(&f, &[0.3, -1.0, 2.0], &[1.0, 2.0, 3.0], DiffMode::Dual).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn sine_modes_agree() {
        let f = ScalarField::smooth(Chart::new(1, "r"), Sine);
        let dual = diff_directional(&f, &[0.0], &[1.0], DiffMode::Dual).unwrap();
        let central = diff_directional(&f, &[0.0], &[1.0], DiffMode::Central { step: 1e-5 }).unwrap();
        assert_eq!(dual, 1.0);
        assert!((central - dual).abs() < 1e-8);
    }

    #[test]
    fn black_box_rejects_dual_mode() {
        let f = ScalarField::black_box(Chart::new(1, "r"), |x| x[0]);
        assert_eq!(
            diff_directional(&f, &[0.0], &[1.0], DiffMode::Dual),
            Err(Error::NoDualEvaluation)
        );
    }

    #[test]
    fn non_finite_is_an_evaluation_failure() {
        let f = ScalarField::black_box(Chart::new(1, "r"), |x| 1.0 / x[0]);
        let r = diff_directional(&f, &[0.0], &[1.0], DiffMode::Central { step: 0.0 });
        assert!(matches!(r, Err(Error::EvaluationFailure { .. })));
    }

    #[test]
    fn polynomial_curve_velocity() {
        let v = curve_velocity(|t| Vector::from_vec(vec![t, t * t]), 0.0, 1e-5).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
        let c = curve_velocity(|_| Vector::from_vec(vec![3.0, -1.0]), 0.4, 1e-5).unwrap();
        assert_eq!(c, Vector::zeros(2));
    }

    #[test]
    fn liouville_on_plane() {
        // λ = p dq on coordinates (q, p)
        let form = OneFormField::new(Chart::new(2, "qp"), |x| Vector::from_vec(vec![x[1], 0.0]));
        let dq = [1.0, 0.0];
        let dp = [0.0, 1.0];
        let a = exterior_d1(&form, &[0.3, 0.7], &dq, &dp, 1e-5).unwrap();
        let b = exterior_d1(&form, &[0.3, 0.7], &dp, &dq, 1e-5).unwrap();
        assert!((a + 1.0).abs() < 1e-9);
        assert!((b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lie_derivative_of_x1_dx2_along_d1() {
        let chart = Chart::new(2, "r2");
        let field = VectorField::constant(chart.clone(), Vector::from_vec(vec![1.0, 0.0]));
        let form = OneFormField::new(chart, |x| Vector::from_vec(vec![0.0, x[0]]));
        for p in [[0.0, 0.0], [1.5, -2.0], [-0.3, 0.9]] {
            let l = lie_derivative_oneform(&field, &form, &p, 1e-5).unwrap();
            assert!((l[0]).abs() < 1e-9 && (l[1] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_fields_have_zero_lie_derivative() {
        let chart = Chart::new(3, "r3");
        let field = VectorField::constant(chart.clone(), Vector::from_vec(vec![1.0, -2.0, 0.5]));
        let form = OneFormField::constant(chart, Vector::from_vec(vec![0.3, 0.1, 4.0]));
        let l = lie_derivative_oneform(&field, &form, &[0.2, 0.3, 0.4], 1e-5).unwrap();
        assert!(l.amax() < 1e-12);
    }

    #[test]
    fn coordinate_vector_fields_commute() {
        let chart = Chart::new(2, "r2");
        let a = VectorField::new(chart.clone(), |x| Vector::from_vec(vec![x[1], 0.0]));
        let b = VectorField::new(chart, |x| Vector::from_vec(vec![0.0, x[0]]));
        // [y∂x, x∂y] = y∂y − x∂x
        let br = vector_field_bracket(&a, &b, &[0.5, 2.0], 1e-5).unwrap();
        assert!((br[0] + 0.5).abs() < 1e-9 && (br[1] - 2.0).abs() < 1e-9);
    }
}
