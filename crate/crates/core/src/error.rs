use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("gram matrix is not exactly symmetric at ({row}, {col})")]
    AsymmetricGram { row: usize, col: usize },

    #[error("skew generator is not exactly antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("metric is degenerate; the ambient form must be nondegenerate")]
    DegenerateMetric,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("point is not a zero of the field (|v| = {residual:e}, tolerance {tol:e})")]
    NotAZero { residual: f64, tol: f64 },

    #[error("vector is not null (|<y,y>| = {value:e}, tolerance {tol:e})")]
    NotNull { value: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient sample: {0}")]
    InsufficientSample(String),

    #[error("estimate did not converge: {0}")]
    NonConvergent(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
