use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input matrix is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    #[error("eigen/singular value iteration failed to converge")]
    ConvergenceFailure,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("density matrix trace {trace:.12} is not 1 within tolerance")]
    InvalidTrace { trace: f64 },

    #[error("density matrix has negative eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("observable set is empty")]
    EmptyObservableSet,

    #[error("invalid dimension {0} (need d >= 2)")]
    InvalidDimension(usize),

    #[error("no built-in SIC-POVM for dimension {0}; supply a fiducial vector")]
    UnsupportedDimension(usize),

    #[error("vector is not a SIC fiducial (overlap deviation {max_deviation:.3e} exceeds tolerance)")]
    NotAFiducial { max_deviation: f64 },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("observable set is not a certified SIC-POVM")]
    NotSic,

    #[error("rotation size {rotation} does not match set size {set}")]
    SizeMismatch { rotation: usize, set: usize },

    #[error("matrix is not orthogonal (max |O^T O - I| = {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },

    #[error("rank {rank} out of range for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("parameter {value} outside [{min}, {max}]")]
    ParameterOutOfRange { value: f64, min: f64, max: f64 },

    #[error("separability bound unknown for a generic observable set")]
    UnknownBound,

    #[error(
        "violation indicator is not monotone on the scan grid: violated at eta = {eta_violated:.6} \
         but not at eta = {eta_clean:.6}"
    )]
    NonMonotoneViolation { eta_violated: f64, eta_clean: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
