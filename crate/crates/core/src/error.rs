use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: u16, right: u16 },

    #[error("strand count {0} out of range (2..={max})", max = crate::braid::MAX_STRANDS)]
    StrandCount(u16),

    #[error("generator index {index} invalid for B_{n}")]
    InvalidLetter { index: i32, n: u16 },

    #[error("invalid group parameters: {0}")]
    InvalidParams(String),

    #[error("subgroup generator range is empty")]
    EmptySubgroup,

    #[error("authentication failure")]
    Authentication,

    #[error("parse error at offset {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("unsupported format version {0:#04x}")]
    UnsupportedVersion(u8),

    #[error("peers must use opposite subgroups")]
    SameSide,

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("key confirmation mismatch")]
    ConfirmationMismatch,

    #[error("decision oracle query budget exhausted")]
    BudgetExhausted,
}

impl Error {
    pub(crate) fn parse(offset: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
