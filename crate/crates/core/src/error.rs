use thiserror::Error;

/// Errors raised by state construction and the spectral calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace is not one (got {0})")]
    InvalidTrace(f64),

    #[error("density matrix not strictly positive (min eigenvalue {0:e})")]
    NotStrictlyPositive(f64),

    #[error("function undefined on spectrum (eigenvalue {0})")]
    Domain(f64),

    #[error("functional is not centered (trace {0:e})")]
    NotCentered(f64),

    #[error("infeasible parameter: {0}")]
    Infeasible(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
