use thiserror::Error;

/// Errors raised by the tomography library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} qubits, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("qubit count {n} outside the supported range 1..={limit}")]
    QubitLimit { n: usize, limit: usize },

    #[error("brute-force oracle refuses n = {n} (limit {limit})")]
    CostGuard { n: usize, limit: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("coefficient vector length {0} is not a power of four")]
    NotPowerOfFour(usize),

    #[error("matrix is not Hermitian: max |M - M^H| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("invalid probability {value} at setting {setting}, outcome {outcome}")]
    InvalidProbability {
        value: f64,
        setting: String,
        outcome: String,
    },

    #[error("dataset invariant violated: {0}")]
    Dataset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    Eigen(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
