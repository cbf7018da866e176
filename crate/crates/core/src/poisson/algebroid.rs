use super::{anchor, PoissonStructure};
use crate::numcore::{
    directional_derivative, gradient, lie_derivative_oneform, vector_field_bracket, Covector,
    DiffMode, OneFormField, ScalarField, Vector, VectorField,
};
use crate::Result;

fn anchor_field(pi: &PoissonStructure, form: &OneFormField) -> VectorField {
    let (pi, form) = (pi.clone(), form.clone());
    VectorField::new(pi.chart().clone(), move |x| {
        anchor(&pi, &form.eval(x), x).unwrap_or_else(|_| Vector::from_element(x.len(), f64::NAN))
    })
}

/// `[φ, ψ] = L_{π#φ} ψ − L_{π#ψ} φ − d(π(φ, ψ))` at `x`.
pub fn oneform_bracket(
    pi: &PoissonStructure,
    phi: &OneFormField,
    psi: &OneFormField,
    x: &[f64],
    step: f64,
) -> Result<Covector> {
    let a = lie_derivative_oneform(&anchor_field(pi, phi), psi, x, step)?;
    let b = lie_derivative_oneform(&anchor_field(pi, psi), phi, x, step)?;
    let (p, f, g) = (pi.clone(), phi.clone(), psi.clone());
    let pairing = ScalarField::black_box(pi.chart().clone(), move |y| {
        p.pair(&f.eval(y), &g.eval(y), y).unwrap_or(f64::NAN)
    });
    let d = gradient(&pairing, x, DiffMode::Central { step })?;
    Ok(a - b - d)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgebroidResiduals {
    /// `‖π#[φ,ψ] − [π#φ, π#ψ]‖∞`
    pub anchor_morphism: f64,
    /// `‖[φ, fψ] − f[φ,ψ] − (π#φ)(f) ψ‖∞`
    pub leibniz: f64,
}

/// Lie algebroid axioms of `(T*P, [·,·], π#)` at the given points.
pub fn cotangent_algebroid_residuals(
    pi: &PoissonStructure,
    phi: &OneFormField,
    psi: &OneFormField,
    f: &ScalarField,
    points: &[Vector],
    step: f64,
) -> Result<AlgebroidResiduals> {
    let mut out = AlgebroidResiduals::default();
    let (a_phi, a_psi) = (anchor_field(pi, phi), anchor_field(pi, psi));
    let f_psi = psi.scale(f);
    for x in points {
        let x = x.as_slice();
        let br = oneform_bracket(pi, phi, psi, x, step)?;
        let lhs = anchor(pi, &br, x)?;
        let rhs = vector_field_bracket(&a_phi, &a_psi, x, step)?;
        out.anchor_morphism = out.anchor_morphism.max((lhs - rhs).amax());

        let br_f = oneform_bracket(pi, phi, &f_psi, x, step)?;
        let fx = f.eval(x);
        let df_along = directional_derivative(
            |y| Vector::from_element(1, f.eval(y)),
            x,
            a_phi.eval(x).as_slice(),
            step,
        )?[0];
        let res = br_f - &br * fx - psi.eval(x) * df_along;
        out.leibniz = out.leibniz.max(res.amax());
    }
    Ok(out)
}

/// Max over points of `‖[df, dg] − d{f, g}‖∞`.
pub fn exact_forms_residual(
    pi: &PoissonStructure,
    f: &ScalarField,
    g: &ScalarField,
    points: &[Vector],
    step: f64,
) -> Result<f64> {
    let (df, dg) = (OneFormField::exact(f), OneFormField::exact(g));
    let (p, a, b) = (pi.clone(), f.clone(), g.clone());
    let bracket = ScalarField::black_box(pi.chart().clone(), move |y| {
        super::bracket_fn(&p, &a, &b, y).unwrap_or(f64::NAN)
    });
    let mut worst: f64 = 0.0;
    for x in points {
        let lhs = oneform_bracket(pi, &df, &dg, x.as_slice(), step)?;
        let rhs = gradient(&bracket, x.as_slice(), DiffMode::Central { step })?;
        worst = worst.max((lhs - rhs).amax());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::poisson::random_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: f64 = crate::tolerances::FD_STEP;

    fn points(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vector> {
        (0..count).map(|_| crate::matgroups::sample_ball(rng, n, 1.0)).collect()
    }

    #[test]
    fn constant_forms_with_constant_pi_bracket_to_zero() {
        let pi = PoissonStructure::constant_symplectic(1);
        let c = pi.chart().clone();
        let phi = OneFormField::constant(c.clone(), Covector::from_column_slice(&[1.0, 2.0]));
        let psi = OneFormField::constant(c, Covector::from_column_slice(&[-3.0, 0.5]));
        assert!(oneform_bracket(&pi, &phi, &psi, &[0.1, 0.2], H).unwrap().amax() < 1e-9);
    }

    #[test]
    fn exact_forms_bracket_to_differential_of_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pi = PoissonStructure::lie_poisson(&LieAlgebra::so3());
        let c = pi.chart().clone();
        let f = ScalarField::smooth(c.clone(), random_polynomial(&mut rng, 3, 3));
        let g = ScalarField::smooth(c.clone(), random_polynomial(&mut rng, 3, 2));
        let pts = points(3, 10, &mut rng);
        assert!(exact_forms_residual(&pi, &f, &g, &pts, H).unwrap() < 1e-6);
        let (df, dg) = (OneFormField::exact(&f), OneFormField::exact(&g));
        for x in pts {
            let lhs = oneform_bracket(&pi, &df, &dg, x.as_slice(), H).unwrap();
            let swapped = oneform_bracket(&pi, &dg, &df, x.as_slice(), H).unwrap();
            assert!((lhs + swapped).amax() < 1e-8);
        }
    }

    #[test]
    fn algebroid_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for pi in [
            PoissonStructure::constant_symplectic(1),
            PoissonStructure::lie_poisson(&LieAlgebra::sl2()),
            PoissonStructure::zero(2),
        ] {
            let c = pi.chart().clone();
            let n = pi.dim();
            let poly = |rng: &mut ChaCha8Rng, d| ScalarField::smooth(c.clone(), random_polynomial(rng, n, d));
            let (a, b, f) = (poly(&mut rng, 2), poly(&mut rng, 3), poly(&mut rng, 2));
            let phi = OneFormField::exact(&a).scale(&poly(&mut rng, 1));
            let psi = OneFormField::exact(&b);
            let pts = points(n, 50, &mut rng);
            let r = cotangent_algebroid_residuals(&pi, &phi, &psi, &f, &pts, H).unwrap();
            assert!(r.anchor_morphism < 1e-6 && r.leibniz < 1e-6, "{} {r:?}", pi.name());
        }
    }
}
