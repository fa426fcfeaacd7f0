use thiserror::Error;

/// Errors raised by the numerical primitives, models and correction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configuration value violates its precondition.
    #[error("configuration error: {0}")]
    Config(String),
    /// A simulated replicate failed; `index` identifies it.
    #[error("replicate {index} failed: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    /// A run could not produce a result.
    #[error("run error: {0}")]
    Run(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn run(msg: impl Into<String>) -> Self {
        Error::Run(msg.into())
    }

    /// Wraps `self` as the failure of replicate `index`.
    pub fn at_replicate(self, index: usize) -> Self {
        Error::Replicate {
            index,
            source: Box::new(self),
        }
    }

    /// True for errors that stem from bad configuration rather than a failed run.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) => true,
            Error::Replicate { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
