use std::io;

use thiserror::Error;

use crate::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {0} is not on the path")]
    NotFound(Vertex),

    #[error("cannot split before vertex {0}")]
    InvalidSplit(Vertex),

    /// A fresh out-neighbour was required but the adjacency list ran out.
    #[error("adjacency list of vertex {0} exhausted")]
    OracleExhausted(Vertex),

    #[error("query budget exceeded: {scope}")]
    BudgetExceeded { scope: BudgetScope },

    /// One of the candidate searches of phase 2 found nothing.
    #[error("search failed: {0}")]
    SearchFailed(&'static str),

    /// Greedy path growth found no vertex outside the path in its sample.
    #[error("no new cycle reachable from path end {0}")]
    GaveUp(Vertex),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetScope {
    Vertex { vertex: Vertex, cap: u64 },
    Total { cap: u64 },
}

impl std::fmt::Display for BudgetScope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BudgetScope::Vertex { vertex, cap } => {
                write!(f, "vertex {vertex} reached its cap of {cap} calls")
            }
            BudgetScope::Total { cap } => write!(f, "total cap of {cap} calls reached"),
        }
    }
}

impl Error {
    /// Short stable tag used in reports and JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::NotFound(_) => "not-found",
            Error::InvalidSplit(_) => "invalid-split",
            Error::OracleExhausted(_) => "oracle-exhausted",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::SearchFailed(_) => "search-failed",
            Error::GaveUp(_) => "gave-up",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
