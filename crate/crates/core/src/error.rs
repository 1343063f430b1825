use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// Variants are grouped so that callers (mainly the CLI) can map them onto
/// exit codes: input problems, resource-budget problems and everything else.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown axis label `{0}`")]
    UnknownAxis(String),

    #[error("label groups overlap on `{0}`")]
    OverlappingGroups(String),

    #[error("empty label group")]
    EmptyGroup,

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// True for errors caused by the caller's input rather than by the toolkit.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownAxis(_)
                | Error::OverlappingGroups(_)
                | Error::EmptyGroup
                | Error::InvalidPmf(_)
                | Error::ShapeMismatch(_)
                | Error::InvalidInput(_)
                | Error::Json { .. }
        )
    }
}
