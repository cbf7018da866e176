use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evaluation failure at {at:?}: {what}")]
    EvaluationFailure { at: Vec<f64>, what: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular linear system (pivot {pivot:e} below threshold)")]
    Singular { pivot: f64 },

    #[error("rank deficiency: expected rank {expected}, found {found}")]
    RankDeficiency { expected: usize, found: usize },

    #[error("unsupported degree: {0}")]
    UnsupportedDegree(String),

    #[error("point outside chart domain: {0}")]
    ChartDomain(String),

    #[error("not composable: residual {residual:e} exceeds {tolerance:e}")]
    NotComposable { residual: f64, tolerance: f64 },

    #[error("sample off the constraint set: residual {residual:e}")]
    OffConstraint { residual: f64 },

    #[error("element left the algebra span: projection residual {residual:e}")]
    OutsideAlgebra { residual: f64 },

    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("`{name}` fails the Jacobi identity (residual {residual:e})")]
    NotLieAlgebra { name: String, residual: f64 },

    #[error("pair fails the bialgebra compatibility condition (residual {residual:e})")]
    IncompatibleBialgebra { residual: f64 },

    #[error("dual-number evaluation unavailable for a black-box field")]
    NoDualEvaluation,

    #[error("sampler failure: {0}")]
    Sampler(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("config error: {0}")]
    Config(String),
}
