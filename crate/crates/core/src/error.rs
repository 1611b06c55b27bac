use num_bigint::BigInt;
use thiserror::Error;

/// Everything that can go wrong while building or querying the objects of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand {0} is a perfect square, so the surd is rational")]
    PerfectSquare(BigInt),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("surd has no irrational part (b = 0)")]
    RationalValue,
    #[error("continued fraction prefix exhausted: needed partial quotient a_{needed}, only a_0..a_{available} are known")]
    InsufficientDigits { needed: usize, available: usize },
    #[error("unresolved comparison: {0}")]
    UnresolvedComparison(String),
    #[error("index {index} is outside [0, {max}]")]
    OutOfRange { index: u64, max: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn unresolved(what: impl Into<String>) -> Self {
        Error::UnresolvedComparison(what.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
