use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("monomial ({a}, {b}) lies outside the window of radius {k}")]
    WindowOverflow { a: i64, b: i64, k: i64 },
    #[error("unknown code `{0}`")]
    UnknownCode(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("validation failed: {0}")]
    ValidationError(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("string too short: {0}")]
    StringTooShort(String),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("strings {0} and {1} fail to commute after lengthening")]
    CommutationFailure(usize, usize),
    #[error("no fixed point after {0} iterations")]
    NonTermination(usize),
    #[error("incompatible codes: {0}")]
    IncompatibleCodes(String),
    #[error("render region is empty")]
    RegionEmpty,
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ParseError(_) | Error::UnknownCode(_) => 2,
            Error::ValidationError(_) | Error::IncompatibleCodes(_) | Error::DimensionMismatch(_) => 3,
            Error::GroupTooLarge { .. }
            | Error::WindowOverflow { .. }
            | Error::WindowTooSmall(_)
            | Error::NonTermination(_)
            | Error::StringTooShort(_)
            | Error::RegionEmpty => 4,
            Error::NotAUnit { .. } | Error::CommutationFailure(..) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
