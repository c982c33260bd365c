use thiserror::Error;

/// Failure modes shared by every numeric operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A series or quadrature failed to meet its tolerance within the allowed work.
    #[error("{op} did not converge: {detail}")]
    Convergence { op: &'static str, detail: String },

    /// A decimal string could not be read back as a number.
    #[error("invalid decimal string {0:?}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn convergence(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Convergence {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
