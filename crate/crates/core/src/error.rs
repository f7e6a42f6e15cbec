//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by map construction, spectral analysis, and sampling.
#[derive(Debug, Clone, Error)]
pub enum MapError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not trace-preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("trace has imaginary part {imag:.3e}; map is not Hermiticity-preserving")]
    NonrealTrace { imag: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "no eigenvalue within {radius:.3e} of {requested}; nearest is {nearest_re}{nearest_im:+}i"
    )]
    EigenvalueNotFound {
        requested: f64,
        nearest_re: f64,
        nearest_im: f64,
        radius: f64,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, MapError>;
