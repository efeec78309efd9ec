use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by fitting, differencing, simulation and I/O.
///
/// Display strings start with a stable kebab-case tag so the CLI diagnostics
/// can be matched by scripts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series-too-short: {0}")]
    SeriesTooShort(String),

    #[error("horizon-zero: the forecast horizon must be at least 1")]
    HorizonZero,

    #[error("state-mismatch: {0}")]
    StateMismatch(String),

    #[error("dimension-mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid-probability: {0} is not in (0, 1)")]
    InvalidProbability(f64),

    #[error("invalid-model: {0}")]
    InvalidModel(String),

    #[error("invalid-request: {0}")]
    InvalidRequest(String),

    #[error("parse-error: {0}")]
    Parse(String),

    #[error("io-error: {0}")]
    Io(#[from] std::io::Error),

    #[error("model-file: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
