use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid type {family}{rank}: {constraint}")]
    InvalidRank {
        family: char,
        rank: usize,
        constraint: &'static str,
    },
    #[error("cannot parse type name {0:?}")]
    ParseType(String),
    #[error("cannot parse word {0:?}: {1}")]
    ParseWord(String, String),
    #[error("simple index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("type {0} is simply-laced and has no short roots")]
    NoShortRoots(String),
    #[error("minimal special orbit of G2 is not handled by the cell calculus; use the Dynkin-curve path")]
    UseDynkinCurve,
    #[error("{what} exceeded budget of {limit}")]
    BudgetExceeded {
        what: String,
        limit: u64,
        /// Length histogram gathered before giving up, when one exists.
        partial: Option<Vec<u64>>,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Unsupported(String),
}
