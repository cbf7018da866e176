use super::PoissonStructure;
use crate::numcore::{gradient, rank, Chart, DiffMode, Matrix, ScalarField, Vector};
use crate::tolerances::ON_CONSTRAINT;
use crate::{Error, Result};

/// Max over points and ordered pairs of `|{f₁∘μ, f₂∘μ}_P(x) − {f₁, f₂}_Q(μ(x))|`.
pub fn poisson_map_residual(
    map: impl Fn(&[f64]) -> Vector + Send + Sync + Clone + 'static,
    source: &PoissonStructure,
    target: &PoissonStructure,
    functions: &[ScalarField],
    points: &[Vector],
) -> Result<f64> {
    let pulled: Vec<ScalarField> = functions
        .iter()
        .map(|f| f.compose(source.chart().clone(), map.clone()))
        .collect();
    let grads = |fs: &[ScalarField], x: &[f64]| -> Result<Vec<Vector>> {
        fs.iter().map(|f| gradient(f, x, DiffMode::default())).collect()
    };
    let mut worst: f64 = 0.0;
    for x in points {
        let y = map(x.as_slice());
        if y.len() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                got: y.len(),
            });
        }
        let (p, q) = (source.check_point(x.as_slice())?, target.check_point(y.as_slice())?);
        let (dl, dr) = (grads(&pulled, x.as_slice())?, grads(functions, y.as_slice())?);
        for a in 0..functions.len() {
            for b in (a + 1)..functions.len() {
                let lhs = dl[a].dot(&(&p * &dl[b]));
                let rhs = dr[a].dot(&(&q * &dr[b]));
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(worst)
}

/// Common zero set of constraint functions `h₁..h_c`.
#[derive(Clone, Debug)]
pub struct Submanifold {
    chart: Chart,
    constraints: Vec<ScalarField>,
}

impl Submanifold {
    pub fn new(chart: Chart, constraints: Vec<ScalarField>) -> Self {
        Self { chart, constraints }
    }

    pub fn codim(&self) -> usize {
        self.constraints.len()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn constraint_values(&self, x: &[f64]) -> Vector {
        Vector::from_iterator(self.codim(), self.constraints.iter().map(|h| h.eval(x)))
    }

    /// Rows are the constraint gradients `dh_a(x)`, spanning `(TC)°`.
    pub fn annihilator(&self, x: &[f64]) -> Result<Matrix> {
        let n = self.chart.dim();
        let mut rows = Matrix::zeros(self.codim(), n);
        for (a, h) in self.constraints.iter().enumerate() {
            rows.set_row(a, &gradient(h, x, DiffMode::default())?.transpose());
        }
        Ok(rows)
    }
}

/// Max over points and annihilator basis pairs of `|dh_b(π# dh_a)|`.
pub fn coisotropy_residual(c: &Submanifold, pi: &PoissonStructure, points: &[Vector]) -> Result<f64> {
    if c.chart.dim() != pi.dim() {
        return Err(Error::DimensionMismatch {
            expected: pi.dim(),
            got: c.chart.dim(),
        });
    }
    let mut worst: f64 = 0.0;
    for x in points {
        let x = x.as_slice();
        let off = c.constraint_values(x).amax();
        if off > ON_CONSTRAINT {
            return Err(Error::OffConstraint { residual: off });
        }
        let ann = c.annihilator(x)?;
        let r = rank(&ann, 1e-8);
        if r < c.codim() {
            return Err(Error::RankDeficiency {
                expected: c.codim(),
                found: r,
            });
        }
        let m = &ann * pi.eval(x) * ann.transpose();
        worst = worst.max(m.amax());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::poisson::{test_functions, Monomial, Polynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear(dim: usize, coeffs: &[(usize, f64)], constant: f64) -> Polynomial {
        let mut terms = vec![Monomial { coef: constant, powers: vec![0; dim] }];
        for &(i, c) in coeffs {
            let mut p = vec![0; dim];
            p[i] = 1;
            terms.push(Monomial { coef: c, powers: p });
        }
        Polynomial { terms }
    }

    #[test]
    fn identity_and_projection_are_poisson() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pi = PoissonStructure::lie_poisson(&LieAlgebra::sl2());
        let fns = test_functions(pi.chart(), &mut rng, 2);
        let pts: Vec<Vector> = (0..10).map(|_| crate::matgroups::sample_ball(&mut rng, 3, 1.0)).collect();
        let id = |x: &[f64]| Vector::from_column_slice(x);
        assert!(poisson_map_residual(id, &pi, &pi, &fns, &pts).unwrap() < 1e-9);

        let sym = PoissonStructure::constant_symplectic(2);
        let zero = PoissonStructure::lie_poisson(&LieAlgebra::abelian(2));
        let fns = test_functions(zero.chart(), &mut rng, 2);
        let pts: Vec<Vector> = (0..10).map(|_| crate::matgroups::sample_ball(&mut rng, 4, 1.0)).collect();
        let proj = |x: &[f64]| Vector::from_column_slice(&x[2..]);
        assert!(poisson_map_residual(proj, &sym, &zero, &fns, &pts).unwrap() < 1e-8);
    }

    #[test]
    fn doubling_map_is_not_poisson() {
        let sym = PoissonStructure::constant_symplectic(1);
        let c = sym.chart().clone();
        let fns = vec![ScalarField::coordinate(c.clone(), 0), ScalarField::coordinate(c, 1)];
        let double = |x: &[f64]| Vector::from_column_slice(x) * 2.0;
        let r = poisson_map_residual(double, &sym, &sym, &fns, &[Vector::from_column_slice(&[0.2, 0.1])]).unwrap();
        assert!((r - 3.0).abs() < 1e-8);
    }

    #[test]
    fn coisotropic_and_symplectic_submanifolds() {
        let sym1 = PoissonStructure::constant_symplectic(1);
        let c1 = sym1.chart().clone();
        let level = Submanifold::new(c1.clone(), vec![ScalarField::smooth(c1, linear(2, &[(1, 1.0)], -1.0))]);
        let on = [Vector::from_column_slice(&[0.4, 1.0]), Vector::from_column_slice(&[-2.0, 1.0])];
        assert!(coisotropy_residual(&level, &sym1, &on).unwrap() < 1e-8);
        assert!(matches!(
            coisotropy_residual(&level, &sym1, &[Vector::from_column_slice(&[0.0, 0.0])]),
            Err(Error::OffConstraint { .. })
        ));

        let sym2 = PoissonStructure::constant_symplectic(2);
        let c2 = sym2.chart().clone();
        let point_pair = Submanifold::new(
            c2.clone(),
            vec![
                ScalarField::coordinate(c2.clone(), 0),
                ScalarField::coordinate(c2.clone(), 2),
            ],
        );
        let r = coisotropy_residual(&point_pair, &sym2, &[Vector::from_column_slice(&[0.0, 0.5, 0.0, 0.7])]).unwrap();
        assert!(r > 0.9);

        let zero_section = Submanifold::new(
            c2.clone(),
            vec![ScalarField::coordinate(c2.clone(), 2), ScalarField::coordinate(c2, 3)],
        );
        let r = coisotropy_residual(&zero_section, &sym2, &[Vector::from_column_slice(&[0.3, -0.2, 0.0, 0.0])]).unwrap();
        assert!(r < 1e-8);
    }

    #[test]
    fn graph_of_identity_is_coisotropic() {
        let pi = PoissonStructure::lie_poisson(&LieAlgebra::so3());
        let prod = PoissonStructure::product(vec![pi.reversed(), pi.clone()]);
        let c = prod.chart().clone();
        let constraints = (0..3)
            .map(|i| ScalarField::smooth(c.clone(), linear(6, &[(i, 1.0), (i + 3, -1.0)], 0.0)))
            .collect();
        let graph = Submanifold::new(c, constraints);
        let x = Vector::from_column_slice(&[0.3, -0.5, 0.9, 0.3, -0.5, 0.9]);
        assert!(coisotropy_residual(&graph, &prod, &[x]).unwrap() < 1e-8);
    }
}
