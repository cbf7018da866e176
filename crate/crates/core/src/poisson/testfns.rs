use rand::Rng;

use super::Monomial;
use crate::numcore::{Chart, Real, ScalarField, SmoothFn};

/// Polynomial in the chart coordinates; evaluates on dual numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl SmoothFn for Polynomial {
    fn eval<S: Real>(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for t in &self.terms {
            let mut m = S::from_f64(t.coef);
            for (&p, xi) in t.powers.iter().zip(x) {
                if p > 0 {
                    m = m * xi.powi(p);
                }
            }
            acc = acc + m;
        }
        acc
    }
}

fn exponents(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        for p in 0..=left {
            cur.push(p);
            rec(dim, left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, degree, &mut Vec::new(), &mut out);
    out
}

/// Polynomial of total degree ≤ `degree` with every coefficient uniform in `[−1, 1]`.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: u32) -> Polynomial {
    let terms = exponents(dim, degree)
        .into_iter()
        .map(|powers| Monomial {
            coef: rng.gen_range(-1.0..=1.0),
            powers,
        })
        .collect();
    Polynomial { terms }
}

/// Coordinate functions, then `count` random quadratics and `count` random cubics.
pub fn test_functions<R: Rng + ?Sized>(chart: &Chart, rng: &mut R, count: usize) -> Vec<ScalarField> {
    let n = chart.dim();
    let mut out: Vec<ScalarField> = (0..n).map(|i| ScalarField::coordinate(chart.clone(), i)).collect();
    for degree in [2, 3] {
        for _ in 0..count {
            out.push(ScalarField::smooth(chart.clone(), random_polynomial(rng, n, degree)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_count_and_determinism() {
        let a = random_polynomial(&mut ChaCha8Rng::seed_from_u64(9), 3, 3);
        let b = random_polynomial(&mut ChaCha8Rng::seed_from_u64(9), 3, 3);
        assert_eq!(a.terms.len(), 20);
        assert_eq!(a, b);
        assert!(a.terms.iter().all(|t| t.coef.abs() <= 1.0));
    }

    #[test]
    fn evaluates_like_monomials() {
        let p = Polynomial {
            terms: vec![Monomial { coef: 2.0, powers: vec![2, 1] }, Monomial { coef: -1.0, powers: vec![0, 0] }],
        };
        assert_eq!(SmoothFn::eval(&p, &[3.0, 0.5]), 8.0);
    }
}
