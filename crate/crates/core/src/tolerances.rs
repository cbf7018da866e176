//! Tolerances and step sizes shared by operations, tests and suites.

/// Default central-difference step for inputs scaled to O(1).
pub const FD_STEP: f64 = 1e-5;

/// Step for the outer derivative when the differentiated quantity is itself
/// produced by a central difference.
pub const FD_STEP_NESTED: f64 = 1e-4;

/// Pivot magnitude below which a linear solve reports singularity.
pub const PIVOT_THRESHOLD: f64 = 1e-10;

/// Composability tolerance for instances with exact structure maps.
pub const COMPOSABLE_EXACT: f64 = 1e-9;

/// Composability tolerance for lifted (finite-difference) instances.
pub const COMPOSABLE_LIFTED: f64 = 1e-6;

/// Membership predicate tolerance for matrix group elements.
pub const MEMBERSHIP: f64 = 1e-9;

/// Projection residual above which a conjugate is declared outside the algebra.
pub const ALGEBRA_SPAN: f64 = 1e-9;

/// Jacobi residual accepted for structure-constant algebras.
pub const JACOBI_EXACT: f64 = 1e-12;

/// Bialgebra compatibility residual accepted by the double construction.
pub const BIALGEBRA_ACCEPT: f64 = 1e-10;

/// Samples in exponential charts are drawn from this coordinate ball.
pub const CHART_SAMPLE_RADIUS: f64 = 0.5;

/// Group parts of groupoid arrows are drawn from this smaller ball so that
/// products of composable triples stay inside the chart ball.
pub const ARROW_SAMPLE_RADIUS: f64 = CHART_SAMPLE_RADIUS / 3.0;

/// Sample points and constraints must agree to this tolerance.
pub const ON_CONSTRAINT: f64 = 1e-9;
