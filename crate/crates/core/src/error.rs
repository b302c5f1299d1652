use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: conflicting values for pair ({a}, {b}): {first} vs {second}")]
    Asymmetry {
        line: usize,
        a: String,
        b: String,
        first: String,
        second: String,
    },

    #[error("line {line}: self-loop at {label} is not allowed here")]
    Diagonal { line: usize, label: String },

    #[error("line {line}: negative value {value} for pair ({a}, {b})")]
    NegativeWeight {
        line: usize,
        a: String,
        b: String,
        value: String,
    },

    #[error("line {line}: zero weight between distinct vertices {a} and {b}")]
    ZeroWeight { line: usize, a: String, b: String },

    #[error("invalid extended weight {0}")]
    InvalidWeight(f64),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("no finite-length path between {0} and {1}")]
    Unreachable(VertexId, VertexId),

    #[error("triangle inequality violated at ({x}, {y}) via {z}")]
    InvalidMetric { x: VertexId, y: VertexId, z: VertexId },

    #[error("vertices must be distinct")]
    SameVertex,

    #[error("vertices must be pairwise distinct")]
    NotDistinct,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("empty input")]
    EmptyInput,

    #[error("paths do not share a starting vertex")]
    MixedStart,

    #[error("duplicate path in input set")]
    DuplicatePath,

    #[error("multiplicity threshold must be at least 2, got {0}")]
    InvalidThreshold(usize),

    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
