use thiserror::Error;

/// Errors shared across the crate.
///
/// Validation errors (bad parameters, unsupported inputs) are distinguished
/// from check failures (a verified property did not hold) so the CLI can map
/// them to exit codes 2 and 1 respectively.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("even characteristic is not supported")]
    EvenCharacteristic,
    #[error("field size {0} exceeds cap {1}")]
    CapExceeded(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("delta = {0} is a square, cannot build quadratic extension")]
    DeltaIsSquare(u32),
    #[error("character evaluated at zero")]
    EvalAtZero,
    #[error("additive character must be nontrivial")]
    TrivialPsi,
    #[error("invalid representation parameter: {0}")]
    InvalidParam(String),
    #[error("matrix ({0},{1};{2},{3}) is singular")]
    SingularMatrix(u32, u32, u32, u32),
    #[error("forbidden double-coset parameter {0}")]
    ForbiddenParam(u32),
    #[error("double-coset parameter must be nonzero")]
    ZeroParam,
    #[error("double coset is not symmetric")]
    AsymmetricCoset,
    #[error("double-coset construction failed: {0}")]
    Construction(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("eigensolver failed to converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("multiset cardinalities differ: {0} vs {1}")]
    CardinalityMismatch(usize, usize),
    #[error("dimension bookkeeping failed: {0}")]
    DimensionMismatch(String),
    #[error("predicted eigenvalue has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("fixed-space projector rank {got} does not match expected {expected}")]
    RankMismatch { got: usize, expected: usize },
    #[error("vector is not fixed by the subgroup")]
    NotFixed,
    #[error("zero function cannot be an eigenfunction")]
    ZeroFunction,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by unusable configuration or inputs
    /// (CLI exit code 2); false for verified-property failures (exit code 1).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::EvenCharacteristic
                | Error::CapExceeded(_, _)
                | Error::DivisionByZero
                | Error::DeltaIsSquare(_)
                | Error::EvalAtZero
                | Error::TrivialPsi
                | Error::InvalidParam(_)
                | Error::SingularMatrix(_, _, _, _)
                | Error::ForbiddenParam(_)
                | Error::ZeroParam
                | Error::InvalidInput(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
