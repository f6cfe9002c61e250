use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The comparison did not separate at the maximum bit budget. Usually
    /// means both sides are exactly equal.
    #[error("comparison undecidable at budget of {bits} bits")]
    UndecidableAtBudget { bits: u64 },

    #[error("precision cap of {cap} bits exhausted at step {index}")]
    PrecisionCap { index: u64, cap: u64 },

    #[error("band not found below cap {cap}")]
    BandNotFound { cap: u64 },

    #[error("term x_{index} is not positive; cannot take its logarithm")]
    NonPositiveTerm { index: u64 },

    #[error("{0} is not available for this sequence")]
    Unsupported(String),

    #[error("corrupt trace: {0}")]
    CorruptTrace(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by running out of precision rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::UndecidableAtBudget { .. } | Error::PrecisionCap { .. }
        )
    }
}
