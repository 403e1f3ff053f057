use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("point {point} out of range for a structure on {n} points")]
    PointOutOfRange { point: usize, n: usize },

    #[error("points must be distinct, got ({0}, {1}, {2})")]
    RepeatedPoint(usize, usize, usize),

    #[error("triple ({0}, {1}, {2}) is not strictly increasing")]
    UnsortedTriple(usize, usize, usize),

    #[error("triple ({0}, {1}, {2}) assigned twice")]
    DuplicateTriple(usize, usize, usize),

    #[error("structure is partial: {missing} triples unassigned")]
    Incomplete { missing: usize },

    #[error("expected {expected} points, got {got}")]
    WrongSize { expected: usize, got: usize },

    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("map is not an embedding: {0}")]
    NotAnEmbedding(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
