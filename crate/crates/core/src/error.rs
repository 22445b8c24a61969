use thiserror::Error;

use crate::model::ProjectId;

/// Everything that can go wrong while building or solving an instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PbError {
    #[error("unknown project `{0}`")]
    UnknownProject(ProjectId),

    #[error("duplicate project `{0}`")]
    DuplicateProject(ProjectId),

    #[error("project `{0}` must have a positive cost")]
    NonPositiveCost(ProjectId),

    #[error("ranking of agent {agent} is incomplete: {missing} project(s) missing")]
    IncompleteRanking { agent: usize, missing: usize },

    #[error("malformed ranking: {0}")]
    MalformedRanking(String),

    #[error("invalid worth vector: {0}")]
    InvalidWorthVector(String),

    #[error("invalid need parameter: {0}")]
    InvalidNeed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl PbError {
    /// Capacity errors map to a dedicated CLI exit code; everything else is a
    /// validation failure.
    pub fn is_capacity(&self) -> bool {
        matches!(self, PbError::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, PbError>;
