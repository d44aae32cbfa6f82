use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("scenario line {line}: {reason}")]
    ScenarioSyntax { line: usize, reason: String },

    #[error("node id {id} out of range for a graph of {n} nodes")]
    InvalidNode { id: usize, n: usize },

    #[error("empty sample set")]
    EmptySamples,

    #[error("need at least {needed} points in range, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("invalid sample {value}: samples must be finite and positive")]
    InvalidSample { value: f64 },

    #[error("unknown sweep aspect `{0}`")]
    UnknownAspect(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("observer failed at step {step} (t = {time} s): {source}")]
    Observer {
        step: u64,
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
