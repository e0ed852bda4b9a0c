use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("duplicate hyperedge {0:?}")]
    DuplicateEdge(Vec<usize>),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error(
        "expected degree differs between blocks {block_a} and {block_b}: d = {d_a} vs d = {d_b}"
    )]
    DegreeMismatch {
        block_a: usize,
        block_b: usize,
        d_a: f64,
        d_b: f64,
    },

    #[error("block {block} would be empty (n * pi = {expected})")]
    EmptyBlock { block: usize, expected: f64 },

    #[error("index {index} is not informative (tau = {tau})")]
    NotInformative { index: usize, tau: f64 },

    #[error("gamma is singular at tau = 1 for index {index}")]
    SingularGamma { index: usize },

    #[error("identity `{name}` violated: max deviation {deviation}")]
    IdentityViolation { name: String, deviation: f64 },

    #[error("matrix is numerically singular at probe z = {re}{im:+}i; retry with a different probe point")]
    SingularProbe { re: f64, im: f64 },

    #[error("eigenvalue is trivial (1 or -(q-1)): vertex projection vanishes")]
    TrivialEigenvalue,

    #[error("dense eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "Galton-Watson tree exceeded node cap {cap} at generation {generation} ({nodes} nodes)"
    )]
    NodeCapExceeded {
        cap: usize,
        generation: usize,
        nodes: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
