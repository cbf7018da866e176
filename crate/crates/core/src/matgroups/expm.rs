use crate::numcore::{self, Matrix};
use crate::{Error, Result};

fn norm1(a: &Matrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm = norm1(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(s);
    let mut term = Matrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if norm1(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `log(I + N)` for nilpotent `N` (exact finite series).
pub fn logm_unipotent(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let nil = a - Matrix::identity(n, n);
    let mut power = nil.clone();
    let mut sum = Matrix::zeros(n, n);
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += &power * (sign / k as f64);
        power = &power * &nil;
    }
    sum
}

fn sqrtm(a: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = Matrix::identity(n, n);
    for _ in 0..60 {
        let y_inv = numcore::inverse(&y)?;
        let z_inv = numcore::inverse(&z)?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let delta = norm1(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * norm1(&y).max(1.0) {
            return Ok(y);
        }
    }
    Ok(y)
}

/// Principal logarithm for matrices with `‖A − I‖_F < 1`, by repeated square
/// roots followed by the Mercator series.
pub fn logm(a: &Matrix) -> Result<Matrix> {
    let n = a.nrows();
    let id = Matrix::identity(n, n);
    let dist = (a - &id).norm();
    if !(dist < 1.0) {
        return Err(Error::ChartDomain(format!(
            "‖A − I‖ = {dist:.3} is outside the logarithm domain"
        )));
    }
    let mut m = a.clone();
    let mut roots = 0;
    while norm1(&(&m - &id)) > 0.05 && roots < 30 {
        m = sqrtm(&m)?;
        roots += 1;
    }
    let nil = &m - &id;
    let mut power = nil.clone();
    let mut sum = Matrix::zeros(n, n);
    for k in 1..80 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = &power * (sign / k as f64);
        sum += &term;
        if norm1(&term) < 1e-18 {
            break;
        }
        power = &power * &nil;
    }
    Ok(sum * 2f64.powi(roots))
}
