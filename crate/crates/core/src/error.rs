use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad shapes, out-of-range indices, inconsistent documents.
    #[error("input error: {0}")]
    Input(String),
    /// The operation was called on an argument that violates its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An exhaustive enumeration would exceed its configured cap.
    #[error("resource limit: {what} needs {required}, limit is {limit}")]
    Resource {
        what: String,
        required: u128,
        limit: u128,
    },
    /// A construction produced an object that failed its own verification.
    #[error("structural failure: {0}")]
    Structural(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, required: u128, limit: u128) -> Self {
        Error::Resource {
            what: what.into(),
            required,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
