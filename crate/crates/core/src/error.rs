use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter set violates one of its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// The instance admits no feasible caching policy.
    #[error("infeasible instance: {0}")]
    Infeasible(String),

    /// A planner or scheduler precondition was broken by its caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("linear program failed: {0}")]
    Lp(#[from] crate::schedule::LpError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
