use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum GpmError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid event: {0}")]
    InvalidEvent(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = GpmError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> GpmError {
    GpmError::InvalidParameter(msg.into())
}
