use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    /// Zero coupling has no beat period, so per-period statistics are undefined.
    #[error("degenerate input: coupling ratio is zero, the fluctuation envelope has no finite period")]
    ZeroCoupling,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("Hermitian eigendecomposition did not converge (dimension {0})")]
    EigenNonConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
