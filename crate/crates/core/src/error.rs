//! Error type shared by all library modules.

use std::path::PathBuf;

/// Errors produced by graph ingestion, detection, and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("empty graph")]
    EmptyGraph,

    #[error("modularity undefined for empty edge set")]
    ModularityUndefined,

    #[error("partition covers {got} nodes, graph has {expected}")]
    PartitionMismatch { got: usize, expected: usize },

    #[error("no significant communities at threshold {threshold}")]
    NoSignificantCommunities { threshold: usize },

    #[error("no training features: every significant-community node has an empty token list")]
    NoTrainingFeatures,

    #[error("unknown node id `{id}` in {path}")]
    UnknownNodeId { id: String, path: PathBuf },

    #[error("conflicting labels for id `{id}`: `{first}` vs `{second}`")]
    ConflictingLabel {
        id: String,
        first: String,
        second: String,
    },

    #[error("group `{label}` has no labeled nodes")]
    GroupAbsent { label: String },

    #[error("empty truth set")]
    EmptyTruthSet,

    #[error("both node sets are empty")]
    BothSetsEmpty,

    #[error("no ground-truth labels to evaluate against")]
    NoLabeledNodes,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("subsample target unreachable in every bucket: {0}")]
    InfeasibleTarget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
