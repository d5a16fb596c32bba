use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("cannot parse word {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A search hit its node cap before reaching a decision.
    #[error("undecided: {what} exceeded the cap of {cap} nodes")]
    Undecided { what: String, cap: usize },

    #[error("budget exhausted: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
