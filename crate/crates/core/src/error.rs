use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("series did not converge within {terms} terms at z = {z}")]
    SeriesNonConvergence { z: String, terms: usize },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("incompatible boundary data: |∫ g·n dσ| = {defect:.3e} exceeds tolerance {tol:.3e}")]
    Incompatible { defect: f64, tol: f64 },
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
