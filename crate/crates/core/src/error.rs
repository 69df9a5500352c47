use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("operator is not unitary (max |U†U - 1| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("function undefined at eigenvalue {eigenvalue}")]
    Domain { eigenvalue: f64 },

    #[error("invalid projective measurement: {reason} (norm {norm:.3e})")]
    InvalidMeasurement { reason: String, norm: f64 },

    #[error("apparatus state is not stationary: ||[gamma, H_hat]||_max = {commutator_norm:.3e}")]
    NonStationaryApparatus { commutator_norm: f64 },

    #[error("state is stationary (energy bandwidth 0): no clock exists for this orbit")]
    NoClock,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
