use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// One or more fixed-point solves hit `max_iter` before reaching the tolerance.
    #[error("no convergence at {} of {total} sample points (worst residual {worst_residual:.3e})", failed.len())]
    NonConvergence {
        failed: Vec<usize>,
        total: usize,
        worst_residual: f64,
    },

    #[error("malformed field dump: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
