use thiserror::Error;

/// Errors produced by state, operator, and evolution constructors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Hilbert-space dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("operator matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian: max |m_ij - conj(m_ji)| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not unitary: max |(U^H U - I)_ij| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state vector norm {0:.3e} is too small to normalize")]
    ZeroNorm(f64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
