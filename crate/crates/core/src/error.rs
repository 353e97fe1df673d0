use thiserror::Error;

/// Position-tagged diagnostic from the system-description reader.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),
    #[error("no structure-table entry for `{0}`")]
    MissingTableEntry(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("connection is not traceless")]
    NotTraceless,
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("degree violation: {0}")]
    DegreeViolation(String),
    #[error("exact division failed: {0}")]
    ExactDivision(String),
    #[error("pivot {pivot} out of range 1..={dim}")]
    InvalidPivot { pivot: usize, dim: usize },
    #[error("wrong dimension: {0}")]
    WrongDimension(String),
    #[error("gauge matrix is not unimodular under its relations: {0}")]
    RelationMissing(String),
    #[error("inconsistent structure equations: {0}")]
    Inconsistent(String),
    #[error("substitution failed: {0}")]
    Substitution(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
