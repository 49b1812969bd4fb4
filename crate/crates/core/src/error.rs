use thiserror::Error;

/// Errors raised across the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("coset enumeration exceeded {cap} live cosets (quotient possibly infinite)")]
    Overflow { cap: usize },
    #[error("resource cap exceeded: {what} reached {cap}")]
    ResourceCap { what: &'static str, cap: usize },
    #[error("radius {requested} exceeds certified radius {certified}")]
    RadiusNotCertified { requested: usize, certified: usize },
    #[error("function is supported on vertex {vertex}, which has undefined transitions")]
    SupportViolation { vertex: usize },
    #[error("test function vanishes identically")]
    ZeroFunction,
    #[error("{what} = {value} outside admissible range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("subgraph is disconnected")]
    Disconnected,
    #[error("planarity not established: {0}")]
    NotPlanar(String),
    #[error("candidate family is empty")]
    EmptyCandidates,
    #[error("inconsistent bounds: {0}")]
    Inconsistent(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
