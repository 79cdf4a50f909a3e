//! Error type shared by every module of the engine.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A name that is not declared where it is used.
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    /// Ill-typed path, morphism, binding or lift.
    #[error("typing error: {0}")]
    Typing(String),

    /// A construction whose finiteness could not be established within the bound.
    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("not a relational fibration: {0}")]
    NotAFibration(String),

    #[error("no referent for constant `{constant}` in table `{object}`")]
    NoReferent { constant: String, object: String },

    #[error("constant `{constant}` has {count} referents in table `{object}`")]
    AmbiguousReferent {
        constant: String,
        object: String,
        count: usize,
    },

    #[error("unknown predicate `{predicate}` from `{object}`")]
    UnknownPredicate { predicate: String, object: String },

    #[error("term `{0}` has no type")]
    UntypedTerm(String),

    /// Malformed data: dangling references, duplicate row IDs, missing cells.
    #[error("load error: {0}")]
    Load(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown {
            kind,
            name: name.into(),
        }
    }

    pub fn typing(msg: impl Into<String>) -> Self {
        Error::Typing(msg.into())
    }

    pub fn unbounded(msg: impl Into<String>) -> Self {
        Error::Unbounded(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Load(e.to_string())
    }
}
