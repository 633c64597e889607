use alloc::string::String;

/// Errors surfaced by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid Cartan type {ty}{rank}")]
    InvalidType { ty: String, rank: usize },
    #[error("operation requires a crystallographic root system, got {0}")]
    NonCrystallographic(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("weight is not dominant integral")]
    NotDominantIntegral,
    #[error("weight lies on a wall of the dominant chamber")]
    SingularWeight,
    #[error("zero weight is not allowed here")]
    ZeroWeight,
    #[error("Weyl group too large to materialize ({0} elements)")]
    WeylGroupTooLarge(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("numerical procedure did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;
