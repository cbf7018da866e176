use super::multivector::Multivector;
use super::{AlgVector, LieAlgebra};
use crate::numcore::Matrix;
use crate::tolerances::{BIALGEBRA_ACCEPT, JACOBI_EXACT};
use crate::{Error, Result};

/// A Lie algebra together with a Lie bracket on its dual, the latter given by
/// structure constants `c̄^k_ij` with `[ε^i, ε^j]_* = Σ_k c̄^k_ij ε^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieBialgebra {
    pub g: LieAlgebra,
    pub gstar: LieAlgebra,
}

impl LieBialgebra {
    pub fn new(g: LieAlgebra, gstar: LieAlgebra) -> Result<Self> {
        if g.dim() != gstar.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: gstar.dim(),
            });
        }
        for alg in [&g, &gstar] {
            let residual = alg.jacobi_residual();
            if residual > JACOBI_EXACT {
                return Err(Error::NotLieAlgebra {
                    name: alg.name().to_string(),
                    residual,
                });
            }
        }
        Ok(Self { g, gstar })
    }

    /// `g` with the zero cobracket.
    pub fn trivial(g: LieAlgebra) -> Result<Self> {
        let gstar = LieAlgebra::abelian(g.dim()).rename(format!("{}*", g.name()));
        Self::new(g, gstar)
    }

    /// Coboundary structure `δ(X) = [X, r]` for `r ∈ ⋀²g`.
    pub fn coboundary(g: LieAlgebra, r: &Multivector) -> Result<Self> {
        let gstar = coboundary_dual(&g, r)?;
        Self::new(g, gstar)
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Applies `e'_j = Σ_i T_ij e_i` on `g` and the contragredient change on the dual.
    pub fn change_basis(&self, t: &Matrix) -> Result<Self> {
        let g = self.g.change_basis(t)?;
        let t_dual = crate::numcore::inverse(t)?.transpose();
        let gstar = self.gstar.change_basis(&t_dual)?;
        Ok(Self { g, gstar })
    }
}

/// `d_*` on `⋀^k g`, `k ∈ {0, 1, 2}`:
/// `⟨d_*X, ε^i∧ε^j⟩ = −⟨X, [ε^i, ε^j]_*⟩` on vectors, zero on scalars, and
/// `d_*(X∧Y) = d_*X∧Y − X∧d_*Y` on bivectors.
pub fn ce_differential(b: &LieBialgebra, p: &Multivector) -> Result<Multivector> {
    let n = b.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.dim(),
        });
    }
    match p.degree() {
        0 => Multivector::zero(n, 1),
        1 => {
            let mut out = Multivector::zero(n, 2)?;
            for i in 0..n {
                for j in (i + 1)..n {
                    let v: f64 = (0..n).map(|k| b.gstar.constant(k, i, j) * p.coeffs()[k]).sum();
                    out.add_blade(&[i, j], -v);
                }
            }
            Ok(out)
        }
        2 => {
            let mut out = Multivector::zero(n, 3)?;
            for (idx, c) in p.terms() {
                if c == 0.0 {
                    continue;
                }
                let (ea, eb) = (
                    Multivector::basis_blade(n, &[idx[0]])?,
                    Multivector::basis_blade(n, &[idx[1]])?,
                );
                let da = ce_differential(b, &ea)?;
                let db = ce_differential(b, &eb)?;
                let term = da.wedge(&eb)?.sub(&ea.wedge(&db)?)?;
                out = out.add(&term.scale(c))?;
            }
            Ok(out)
        }
        k => Err(Error::UnsupportedDegree(format!(
            "d_* is implemented on degrees 0, 1, 2; got {k}"
        ))),
    }
}

/// Schouten bracket in degrees (1,1), (1,2) and (2,1), built from
/// `[X, Y∧Z] = [X,Y]∧Z + Y∧[X,Z]` and `[η, X] = −[X, η]`.
pub fn schouten(g: &LieAlgebra, p: &Multivector, q: &Multivector) -> Result<Multivector> {
    let n = g.dim();
    for m in [p, q] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.dim(),
            });
        }
    }
    match (p.degree(), q.degree()) {
        (1, 1) => Ok(Multivector::from_vector(
            &g.bracket_unchecked(&p.to_vector(), &q.to_vector()),
        )),
        (1, 2) => {
            let x = p.to_vector();
            let mut out = Multivector::zero(n, 2)?;
            for (idx, c) in q.terms() {
                if c == 0.0 {
                    continue;
                }
                let ya = Multivector::from_vector(&g.basis(idx[0]));
                let yb = Multivector::from_vector(&g.basis(idx[1]));
                let xa = Multivector::from_vector(&g.bracket_unchecked(&x, &g.basis(idx[0])));
                let xb = Multivector::from_vector(&g.bracket_unchecked(&x, &g.basis(idx[1])));
                let term = xa.wedge(&yb)?.add(&ya.wedge(&xb)?)?;
                out = out.add(&term.scale(c))?;
            }
            Ok(out)
        }
        (2, 1) => Ok(schouten(g, q, p)?.scale(-1.0)),
        (a, b) => Err(Error::UnsupportedDegree(format!(
            "Schouten bracket is implemented for degrees (1,1), (1,2), (2,1); got ({a},{b})"
        ))),
    }
}

/// Max over basis pairs of `‖d_*[e_i,e_j] − [e_i, d_*e_j] − [d_*e_i, e_j]‖∞`.
pub fn bialgebra_residual(b: &LieBialgebra) -> f64 {
    let n = b.dim();
    let mut worst: f64 = 0.0;
    let basis: Vec<Multivector> = (0..n)
        .map(|i| Multivector::from_vector(&b.g.basis(i)))
        .collect();
    let d: Vec<Multivector> = basis
        .iter()
        .map(|e| ce_differential(b, e).expect("degree 1"))
        .collect();
    for i in 0..n {
        for j in 0..n {
            let br = schouten(&b.g, &basis[i], &basis[j]).expect("degree (1,1)");
            let lhs = ce_differential(b, &br).expect("degree 1");
            let r1 = schouten(&b.g, &basis[i], &d[j]).expect("degree (1,2)");
            let r2 = schouten(&b.g, &d[i], &basis[j]).expect("degree (2,1)");
            let res = lhs.sub(&r1).and_then(|m| m.sub(&r2)).expect("same shape");
            worst = worst.max(res.norm_inf());
        }
    }
    worst
}

/// Dual structure constants of the coboundary cobracket `δ(X) = [X, r]`,
/// chosen so that `d_* = δ`.
pub fn coboundary_dual(g: &LieAlgebra, r: &Multivector) -> Result<LieAlgebra> {
    let n = g.dim();
    if r.degree() != 2 {
        return Err(Error::UnsupportedDegree(format!(
            "r must be a bivector, got degree {}",
            r.degree()
        )));
    }
    let mut out = LieAlgebra::abelian(n).rename(format!("{}*r", g.name()));
    for k in 0..n {
        let delta = schouten(g, &Multivector::from_vector(&g.basis(k)), r)?;
        for i in 0..n {
            for j in 0..n {
                let idx = out.idx(k, i, j);
                out.constants[idx] = if i == j { 0.0 } else { -delta.component(&[i, j]) };
            }
        }
    }
    Ok(out)
}

/// Lie algebra on `g ⊕ g*` (basis `e_1..e_n, ε^1..ε^n`) with the brackets of
/// `g` and `g*` on the summands and `[X, φ] = ad*_X φ − ad*_φ X`.
pub fn drinfeld_double(b: &LieBialgebra) -> Result<LieAlgebra> {
    let residual = bialgebra_residual(b);
    if !(residual <= BIALGEBRA_ACCEPT) {
        return Err(Error::IncompatibleBialgebra { residual });
    }
    let n = b.dim();
    let mut d = LieAlgebra::abelian(2 * n).rename(format!("D({})", b.g.name()));
    d.labels = b
        .g
        .labels()
        .iter()
        .cloned()
        .chain(b.gstar.labels().iter().map(|l| format!("{l}*")))
        .collect();
    let set = |d: &mut LieAlgebra, k: usize, i: usize, j: usize, v: f64| {
        let a = d.idx(k, i, j);
        let bb = d.idx(k, j, i);
        d.constants[a] = v;
        d.constants[bb] = -v;
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i < j {
                    set(&mut d, k, i, j, b.g.constant(k, i, j));
                    set(&mut d, n + k, n + i, n + j, b.gstar.constant(k, i, j));
                }
                // [e_i, ε^j] = −Σ_k c^j_ik ε^k + Σ_k c̄^i_jk e_k
                set(&mut d, n + k, i, n + j, -b.g.constant(j, i, k));
                set(&mut d, k, i, n + j, b.gstar.constant(i, j, k));
            }
        }
    }
    Ok(d)
}

/// Max over basis triples of `|⟨⟨[a,b],c⟩⟩ + ⟨⟨b,[a,c]⟩⟩|` for the pairing
/// `⟨⟨(X,φ),(Y,ψ)⟩⟩ = φ(Y) + ψ(X)` on a `2n`-dimensional double.
pub fn pairing_invariance_residual(double: &LieAlgebra) -> f64 {
    let two_n = double.dim();
    let n = two_n / 2;
    let form = |u: &AlgVector, v: &AlgVector| -> f64 {
        (0..n).map(|i| u[n + i] * v[i] + v[n + i] * u[i]).sum()
    };
    let mut worst: f64 = 0.0;
    for a in 0..two_n {
        for bi in 0..two_n {
            for c in 0..two_n {
                let (ea, eb, ec) = (double.basis(a), double.basis(bi), double.basis(c));
                let v = form(&double.bracket_unchecked(&ea, &eb), &ec)
                    + form(&eb, &double.bracket_unchecked(&ea, &ec));
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r_ef(n: usize) -> Multivector {
        Multivector::basis_blade(n, &[1, 2]).unwrap()
    }

    #[test]
    fn abelian_dual_has_zero_differential() {
        let b = LieBialgebra::trivial(LieAlgebra::so3()).unwrap();
        for i in 0..3 {
            let e = Multivector::from_vector(&b.g.basis(i));
            assert_eq!(ce_differential(&b, &e).unwrap().norm_inf(), 0.0);
        }
        assert_eq!(bialgebra_residual(&b), 0.0);
    }

    #[test]
    fn two_dim_differential() {
        // [ε¹, ε²]_* = ε¹
        let gstar = LieAlgebra::from_triples("b2", 2, &[(0, 1, 0, 1.0)]).unwrap();
        let b = LieBialgebra::new(LieAlgebra::abelian(2), gstar).unwrap();
        let e1 = Multivector::basis_blade(2, &[0]).unwrap();
        assert_eq!(ce_differential(&b, &e1).unwrap().component(&[0, 1]), -1.0);
    }

    #[test]
    fn differential_squares_to_zero() {
        let b = LieBialgebra::coboundary(LieAlgebra::sl2(), &r_ef(3)).unwrap();
        for i in 0..3 {
            let e = Multivector::from_vector(&b.g.basis(i));
            let dd = ce_differential(&b, &ce_differential(&b, &e).unwrap()).unwrap();
            assert!(dd.norm_inf() < 1e-12);
        }
        let d0 = ce_differential(&b, &Multivector::scalar(3, 2.0)).unwrap();
        assert_eq!(ce_differential(&b, &d0).unwrap().norm_inf(), 0.0);
    }

    #[test]
    fn schouten_so3_example() {
        let g = LieAlgebra::so3();
        let e1 = Multivector::basis_blade(3, &[0]).unwrap();
        let e12 = Multivector::basis_blade(3, &[0, 1]).unwrap();
        assert_eq!(
            schouten(&g, &e1, &e12).unwrap(),
            Multivector::basis_blade(3, &[0, 2]).unwrap()
        );
    }

    #[test]
    fn schouten_degree_one_is_bracket_and_rejects_others() {
        let g = LieAlgebra::sl2();
        let x = Multivector::from_vector(&g.basis(0));
        let y = Multivector::from_vector(&g.basis(1));
        assert_eq!(
            schouten(&g, &x, &y).unwrap().to_vector(),
            g.bracket(&g.basis(0), &g.basis(1)).unwrap()
        );
        let eta = Multivector::basis_blade(3, &[0, 1]).unwrap();
        assert!(matches!(schouten(&g, &eta, &eta), Err(Error::UnsupportedDegree(_))));
    }

    #[test]
    fn coboundary_sl2_is_compatible() {
        let b = LieBialgebra::coboundary(LieAlgebra::sl2(), &r_ef(3)).unwrap();
        assert!(bialgebra_residual(&b) < 1e-12);
        let d = drinfeld_double(&b).unwrap();
        assert!(d.jacobi_residual() < 1e-12);
        assert!(pairing_invariance_residual(&d) < 1e-12);
    }

    #[test]
    fn semidirect_double() {
        let b = LieBialgebra::trivial(LieAlgebra::heisenberg()).unwrap();
        let d = drinfeld_double(&b).unwrap();
        assert!(d.jacobi_residual() < 1e-12);
        assert_eq!(d.antisymmetry_defect(), 0.0);
    }

    #[test]
    fn mismatched_so3_pair_is_rejected() {
        let b = LieBialgebra::new(LieAlgebra::so3(), LieAlgebra::so3()).unwrap();
        let r = bialgebra_residual(&b);
        assert!(r > 0.5, "{r}");
        assert!(matches!(drinfeld_double(&b), Err(Error::IncompatibleBialgebra { .. })));
    }

    #[test]
    fn double_restricts_to_summands() {
        let b = LieBialgebra::coboundary(LieAlgebra::sl2(), &r_ef(3)).unwrap();
        let d = drinfeld_double(&b).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(d.constant(k, i, j), b.g.constant(k, i, j));
                    assert_eq!(d.constant(3 + k, 3 + i, 3 + j), b.gstar.constant(k, i, j));
                    assert_eq!(d.constant(3 + k, i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn broken_dual_is_rejected() {
        assert!(matches!(
            LieBialgebra::new(LieAlgebra::so3(), LieAlgebra::broken()),
            Err(Error::NotLieAlgebra { .. })
        ));
    }
}
