use crate::set::Interval;
use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: i64, hi: i64 },

    #[error("support of length {0} exceeds the supported maximum")]
    SupportTooLarge(u64),

    #[error("integer overflow: {0}")]
    Overflow(&'static str),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("interval {interval} does not overlap support {support}")]
    EmptyWindow { interval: Interval, support: Interval },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("set spec nesting exceeds depth {0}")]
    DepthExceeded(usize),

    #[error("stage n={n} skipped: {reason}")]
    StageSkipped { n: u64, reason: String },

    #[error("greedy cover failed: {reason}")]
    CoverFailed {
        reason: String,
        trace: Box<crate::jin::CoverTrace>,
    },

    #[error("no stage produced a verified witness ({tried} tried)")]
    NoWitness {
        tried: usize,
        trace: Box<crate::jin::CoverTrace>,
    },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            detail: detail.into(),
        }
    }
}

/// Syntax or semantic error in a set spec, with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}
