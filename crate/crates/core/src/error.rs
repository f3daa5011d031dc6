use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid labeling scheme: {0}")]
    InvalidScheme(String),

    #[error("malformed type vector: {0}")]
    MalformedVector(String),

    #[error("type vector {vector} is not valid for this labeling scheme: {reason}")]
    InvalidTypeVector { vector: String, reason: String },

    #[error("degree {0} is too small")]
    DegreeTooSmall(usize),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("no edge length realizes type vector {vector}: {reason}")]
    NoSolution { vector: String, reason: String },

    #[error("comparison is inconclusive at the current precision")]
    NeedsMorePrecision,

    #[error("vertex cap of {limit} exceeded")]
    ResourceLimit { limit: usize },

    #[error("ball is incomplete: {open_slots} open slots")]
    IncompleteBall { open_slots: usize },

    #[error("ball has no vertices")]
    EmptyBall,

    #[error("generator a{generator} is paired with both a{first} and a{second}")]
    InconsistentInverses {
        generator: usize,
        first: usize,
        second: usize,
    },

    #[error("generator a{0} has no inverse relator")]
    MissingInverse(usize),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("word-problem oracle failed: {0}")]
    OracleFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
