use std::path::PathBuf;

use thiserror::Error;

use crate::model::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("node {0} is not part of the graph")]
    UnknownNode(NodeId),

    #[error("node {target} is unreachable from node {from}")]
    Unreachable { from: NodeId, target: NodeId },

    #[error("no alive nodes remain")]
    SimulationOver,

    #[error("clustering invariant violated: {0}")]
    InvalidClustering(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
