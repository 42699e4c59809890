use thiserror::Error;

/// Errors raised by graph construction, exact solvers and samplers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge weight must be positive and finite, got {0}")]
    InvalidWeight(f64),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no path between {from} and {to}")]
    NoPath { from: usize, to: usize },

    #[error("vertex {0} has zero degree")]
    ZeroDegree(usize),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("size {size} exceeds the cap of {cap} for {what}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("linear system is singular ({0})")]
    Singular(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("mixing time exceeds {cap} steps (chain may be periodic)")]
    MixingTimeout { cap: u64 },

    #[error("kernel is reducible")]
    Reducible,

    #[error("kernel is not reversible: detailed-balance violation {0:e}")]
    NotReversible(f64),

    #[error("invalid flow: {0}")]
    InvalidFlow(String),

    #[error("degree sum {0} is odd")]
    OddDegreeSum(usize),

    #[error("rejection sampling failed after {attempts} attempts (empirical acceptance rate {acceptance_rate})")]
    RejectionFailure { attempts: usize, acceptance_rate: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
