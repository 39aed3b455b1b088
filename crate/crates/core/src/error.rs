use thiserror::Error;

/// Errors raised by the linear algebra substrate and the checks built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} outside the supported range 1..=64")]
    UnsupportedDimension(usize),

    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("trace is not real: imaginary part {imag:e} exceeds tolerance {bound:e}")]
    NonRealTrace { imag: f64, bound: f64 },

    #[error(
        "matrix is not Hermitian: symmetry residual {residual:e} exceeds {bound:e} \
         (worst entry ({row}, {col}))"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        residual: f64,
        bound: f64,
    },

    #[error(
        "matrix is not positive semidefinite: eigenvalue #{index} = {value:e} below {bound:e}"
    )]
    NotPsd {
        index: usize,
        value: f64,
        bound: f64,
    },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:e})"
    )]
    ConvergenceFailure { sweeps: usize, off: f64 },

    #[error("matrix function is not finite at eigenvalue {eigenvalue:e} (got {value})")]
    DomainError { eigenvalue: f64, value: f64 },

    #[error("invalid exponent p = {0}: must be positive")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index k = {k} outside 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("empty vector")]
    EmptyVector,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
