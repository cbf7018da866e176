//! Numerical kernel: vectors and matrices, dual numbers, central
//! differences, exterior and Lie derivatives of 1-forms, linear solves.
//!
//! Every manifold in the crate is handled through a single global chart, so
//! points, tangent vectors and covectors are plain coordinate arrays and the
//! pairing of a covector with a vector is the Euclidean dot product.

mod diff;
mod dual;
mod fields;
mod linalg;

pub use diff::{
    curve_velocity, diff_directional, directional_derivative, exterior_d1, exterior_d1_matrix,
    gradient, jacobian, lie_derivative_oneform, vector_field_bracket, DiffMode,
};
pub use dual::{Dual, Real};
pub use fields::{Chart, OneFormField, ScalarField, SmoothFn, VectorField};
pub use linalg::{
    inverse, least_squares, max_abs, null_space, pair, rank, solve, solve_matrix,
};

/// Dense column vector of reals.
pub type Vector = nalgebra::DVector<f64>;
/// Dense real matrix.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Covectors are stored as coordinate arrays in the dual basis.
pub type Covector = nalgebra::DVector<f64>;

pub(crate) fn ensure_finite(at: &[f64], values: &[f64], what: &str) -> crate::Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(crate::Error::EvaluationFailure {
            at: at.to_vec(),
            what: what.to_string(),
        })
    }
}
