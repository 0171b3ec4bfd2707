use thiserror::Error;

/// Errors produced by the solver, the algebra layer and the analysis tools.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("system too large for dense treatment: {sites} sites (limit {limit})")]
    Size { sites: usize, limit: usize },

    #[error("invalid Clifford tableau: {0}")]
    InvalidTableau(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations (best residual {residual:e})"
    )]
    Solver { iterations: usize, residual: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("spectrum normalization failed: {0}")]
    Normalization(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(err: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
