use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The three variants map onto the CLI exit codes: domain and precondition
/// failures exit with 2, capacity failures with 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: out-of-range index, dimension mismatch, bad sign, ...
    #[error("domain error: {0}")]
    Domain(String),

    /// Well-formed input that violates an operation's precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Input is valid but exceeds a configured enumeration cap.
    #[error("capacity exceeded: {what} = {value} exceeds cap {cap}")]
    Capacity {
        what: &'static str,
        value: usize,
        cap: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
        if value > cap {
            Err(Error::Capacity { what, value, cap })
        } else {
            Ok(())
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
