use thiserror::Error;

use crate::market::AgentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{agent} has tied utilities for {first} and {second}")]
    Tie {
        agent: AgentId,
        first: AgentId,
        second: AgentId,
    },
    #[error("{agent} has zero utility for {partner}; zero is reserved for remaining unmatched")]
    ZeroUtility { agent: AgentId, partner: AgentId },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid preference list for {agent}: {reason}")]
    InvalidList { agent: AgentId, reason: String },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("invalid belief: {0}")]
    Belief(String),
    #[error("{what} exceeds the size bound {bound}")]
    SizeBound { what: String, bound: usize },
    #[error("profile space of {required} profiles exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("state {state} does not have a unique stable matching")]
    NotUniquelyStable { state: String },
    #[error("the economy does not satisfy the SPC in state {state}")]
    SpcFails { state: String },
    #[error("{partner} is not on the list of {agent}")]
    NotListed { agent: AgentId, partner: AgentId },
    #[error("unknown {kind} name `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("construction assertion failed: {0}")]
    Construction(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("parse error at line {line}, column {column} ({path}): {message}")]
    Parse {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
