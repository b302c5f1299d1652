pub mod error;
pub mod exec;
pub mod generate;
pub mod hopf_rinow;
pub mod graph;
pub mod linalg;
pub mod metric;
pub mod oracle;
pub mod parse;
pub mod resistance;
pub mod structure;
pub mod tolerance;
pub mod weight;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{ConductanceGraph, Labels, Path, VertexId, WeightOracle, WeightedGraph};
pub use metric::MetricTable;
pub use weight::ExtendedWeight;
