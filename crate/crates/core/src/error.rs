//! Error type shared by every stage of the pipeline.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ArimaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArimaError {
    #[error("series '{0}' has no observed values")]
    EmptySeries(String),

    #[error("differencing order {d} too high for {len} observations")]
    OrderTooHigh { d: usize, len: usize },

    #[error("degenerate series: zero variance")]
    DegenerateSeries,

    #[error("lag {max_lag} out of range for {len} observations")]
    LagRange { max_lag: usize, len: usize },

    #[error("numerical degeneracy at lag {lag}: partial autocorrelation {value}")]
    NumericalDegeneracy { lag: usize, value: f64 },

    #[error("insufficient data: need ≥ {need}, have {have}")]
    InsufficientData { need: usize, have: usize },

    #[error("parameter dimensions do not match order (p={p}, q={q})")]
    DimensionMismatch { p: usize, q: usize },

    #[error("AR polynomial is nonstationary: a root lies on or inside the unit circle")]
    NonStationary,

    #[error("MA polynomial is noninvertible: a root lies on or inside the unit circle")]
    NonInvertible,

    #[error("innovation variance must be positive and finite, got {0}")]
    InvalidVariance(f64),

    #[error("non-identifiable model: every simplex vertex violates the root constraints")]
    NonIdentifiable,

    #[error("Ljung-Box needs lags > fitted parameters (lags={lags}, fitted={fitted})")]
    NonPositiveDof { lags: usize, fitted: usize },

    #[error("no viable model in grid: {}", .0.join("; "))]
    NoViableModel(Vec<String>),

    #[error("horizon must be at least 1")]
    HorizonRange,

    #[error("fit does not belong to this series: {0}")]
    FitMismatch(String),

    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),

    #[error("CSV parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("I/O error: {0}")]
    Io(String),
}
