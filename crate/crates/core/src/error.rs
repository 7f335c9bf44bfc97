use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("could not parse {what:?}: {reason}")]
    Parse { what: String, reason: String },

    /// An enumeration would exceed its configured budget.
    #[error("capacity exceeded in {context}: need {needed}, cap is {cap}")]
    Capacity {
        context: String,
        needed: u64,
        cap: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// A computed value violated an identity that must hold; this is a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{0} is out of range")]
    OutOfRange(String),

    /// No closed-form route applies; the generic engine should be used.
    #[error("no structured solver for {0}")]
    Delegate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
