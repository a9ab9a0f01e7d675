use thiserror::Error;

/// Errors produced by constructions, tracers and file codecs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument falls outside the domain of the operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A block, key or codeword is malformed (wrong size, duplicate or out-of-range entry).
    #[error("malformed structure: {0}")]
    Structural(String),

    /// The set system is well formed but does not have the design property.
    #[error("not a {t}-design: subset {witness:?} is covered {count} times, expected {lambda}")]
    NotADesign {
        t: usize,
        lambda: u64,
        witness: Vec<u32>,
        count: u64,
    },

    /// A counting identity failed; the input cannot come from a design.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    /// No shortest code exists for the requested parameters.
    #[error("no shortest code: {0}")]
    NoShortestCode(String),

    /// The request exceeds a configured size or work ceiling.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The coalition or pirate behaviour leaves the erasure model.
    #[error("outside the attack model: {0}")]
    Model(String),

    /// A pirate word is inconsistent with the code it is traced against.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
