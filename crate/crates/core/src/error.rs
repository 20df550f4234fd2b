use thiserror::Error;

/// Errors produced while building contexts, computing lattices, scaling
/// records, or reading and writing interchange formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{kind} index {index} out of range (len {len})")]
    Index { kind: &'static str, index: usize, len: usize },

    #[error("invalid context: {0}")]
    Validation(String),

    #[error("cycle in declared {0} order involving `{1}`")]
    Cycle(&'static str, String),

    #[error("invalid attribute term `{text}`: {reason}")]
    Term { text: String, reason: String },

    #[error("{format} parse error at line {line}: {message}")]
    Parse { format: &'static str, line: usize, message: String },

    #[error("SOIF parse error at byte {offset}: {message}")]
    Soif { offset: usize, message: String },

    #[error("invalid magnitude `{0}`")]
    Magnitude(String),

    #[error("cannot scale record `{record}`: tag `{tag}` value `{value}`: {reason}")]
    Scaling { record: String, tag: String, value: String, reason: String },

    #[error("invalid scale set: {0}")]
    ScaleConfig(String),

    #[error("duplicate object `{0}`")]
    DuplicateObject(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("tag `{0}` names several attributes; give a value")]
    AmbiguousAttribute(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(format: &'static str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { format, line, message: message.into() }
}
