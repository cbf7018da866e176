use super::{Matrix, Vector};
use crate::tolerances::PIVOT_THRESHOLD;
use crate::{Error, Result};

/// Dual pairing `⟨φ, v⟩ = Σ φ_i v_i`.
pub fn pair(covector: &Vector, vector: &Vector) -> f64 {
    covector.dot(vector)
}

/// Largest absolute entry, zero for empty input.
pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve_matrix(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    if b.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows(),
        });
    }
    let mut m = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m[(r, col)]))
            .max_by(|p, q| p.1.abs().total_cmp(&q.1.abs()))
            .expect("non-empty pivot range");
        if pivot.abs() < PIVOT_THRESHOLD || !pivot.is_finite() {
            return Err(Error::Singular { pivot: pivot.abs() });
        }
        m.swap_rows(col, pivot_row);
        x.swap_rows(col, pivot_row);
        for r in col + 1..n {
            let factor = m[(r, col)] / m[(col, col)];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                m[(r, c)] -= factor * m[(col, c)];
            }
            for c in 0..x.ncols() {
                x[(r, c)] -= factor * x[(col, c)];
            }
        }
    }
    for col in (0..n).rev() {
        for c in 0..x.ncols() {
            let mut acc = x[(col, c)];
            for k in col + 1..n {
                acc -= m[(col, k)] * x[(k, c)];
            }
            x[(col, c)] = acc / m[(col, col)];
        }
    }
    Ok(x)
}

/// Solves `A x = b`.
pub fn solve(a: &Matrix, b: &Vector) -> Result<Vector> {
    let x = solve_matrix(a, &Matrix::from_column_slice(b.len(), 1, b.as_slice()))?;
    Ok(x.column(0).into_owned())
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    solve_matrix(a, &Matrix::identity(a.nrows(), a.nrows()))
}

/// Least-squares solution of `A x ≈ b` for a full-column-rank `A`, with the
/// residual norm `‖A x − b‖∞`.
pub fn least_squares(a: &Matrix, b: &Vector) -> Result<(Vector, f64)> {
    let normal = a.transpose() * a;
    let x = solve(&normal, &(a.transpose() * b))?;
    let residual = (a * &x - b).amax();
    Ok((x, residual))
}

/// Orthonormal basis (columns) of `ker A`, from the singular value decomposition.
pub fn null_space(a: &Matrix, tol: f64) -> Matrix {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    // Pad to at least n rows so the SVD exposes every right singular vector.
    let padded = if a.nrows() < n {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Numerical rank: count of singular values above `tol`.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s > tol)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 3.0]);
        let x = solve(&a, &Vector::from_vec(vec![1.0, 8.0])).unwrap();
        assert!((&a * &x - Vector::from_vec(vec![1.0, 8.0])).amax() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            solve(&a, &Vector::from_vec(vec![1.0, 1.0])),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = Matrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = null_space(&a, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).amax() < 1e-14);
        assert!((k.transpose() * &k - Matrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn rank_counts_independent_columns() {
        let a = Matrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(rank(&a, 1e-10), 2);
    }
}
