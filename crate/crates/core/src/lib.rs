//! Numerical verification laboratory for Poisson geometry and Lie groupoids.
//!
//! The crate realizes Lie–Poisson structures, cotangent groupoids of matrix
//! Lie groups, tangent and cotangent lifts of groupoids, symplectic groupoid
//! conditions, Lie bialgebras and the classical double as executable
//! operations over concrete charts, and certifies the identities relating
//! them by evaluating residuals at seeded sample points.
//!
//! Module map:
//!
//! - [`numcore`]: dense linear algebra, dual numbers, finite differences,
//!   exterior derivative and Lie derivative of 1-forms in a chart.
//! - [`liealg`]: Lie algebras by structure constants, multivectors,
//!   Chevalley–Eilenberg differential, Schouten bracket, bialgebras, double.
//! - [`matgroups`]: catalog of matrix Lie groups with exponential charts.
//! - [`poisson`]: Poisson structures in charts and their residual checks.
//! - [`groupoids`]: uniform groupoid interface, concrete instances, tangent
//!   and cotangent lifts, algebroid extraction.
//! - [`symplectic`]: the canonical symplectic groupoid `T*G ⇒ g*`.
//! - [`harness`]: configuration, suites and reports behind the CLI.

pub mod error;
pub mod groupoids;
pub mod harness;
pub mod liealg;
pub mod matgroups;
pub mod numcore;
pub mod poisson;
pub mod symplectic;
pub mod tolerances;

pub use error::{Error, Result};
