//! Crate-wide error type. Field validation failures are distinct variants so
//! the CLI can map them to distinct exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid field: A must be odd")]
    AEven,
    #[error("invalid field: A must be squarefree and nonzero")]
    ANotSquarefree,
    #[error("invalid field: D must be squarefree")]
    DNotSquarefree,
    #[error("invalid field: D must equal B^2 + C^2")]
    DMismatch,
    #[error("invalid field: B must be positive")]
    BNotPositive,
    #[error("invalid field: C must be positive")]
    CNotPositive,
    #[error("invalid field: A and D must be coprime")]
    SharedFactor,

    #[error("elements belong to different fields")]
    MixedFields,
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("element is not a primitive integer quadruple")]
    NotPrimitive,

    #[error("p-adic precision exhausted after {0} digits")]
    PrecisionExhausted(u32),
    #[error("operation would drop precision below one digit")]
    PrecisionUnderflow,

    #[error("radicand has no presentation A(D+B*sqrt(D)) times a square of the quadratic subfield: {0}")]
    NormalizationFailed(String),

    #[error("oracle refuses this input: {0}")]
    OracleRefused(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for the field-parameter validation family.
    pub fn is_field_validation(&self) -> bool {
        matches!(
            self,
            Error::AEven
                | Error::ANotSquarefree
                | Error::DNotSquarefree
                | Error::DMismatch
                | Error::BNotPositive
                | Error::CNotPositive
                | Error::SharedFactor
        )
    }
}
