//! Topology-awareness analysis for node embeddings.
//!
//! * [`graph`]: undirected graph storage, BFS, degree, PageRank, closeness.
//! * [`metrics`]: structural group distances, hop partitions, distortion.
//! * [`sampling`]: k-center seed selection and baselines.
//! * [`embed`]: a parameter-free propagation embedder and synthetic data.
//! * [`eval`]: per-subgroup accuracy, discrepancy, bound drivers.
//! * [`ingest`]: file formats and reports.
//! * [`verify`]: built-in randomized oracle suites.

pub mod embed;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod sampling;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use graph::{Graph, HopDistance, TokenTable, VertexId};
