//! Additive, pairwise, subset and sublinear spanners for unweighted graphs,
//! with exact verification oracles.
//!
//! All constructions share one deterministic tie-break for shortest paths
//! (see [`graph::bfs::ShortestPathTree`]), so every path family they use is
//! consistent and every build is reproducible from its seed.

pub mod additive;
pub mod base;
pub mod classes;
pub mod clustering;
pub mod error;
pub mod graph;
pub mod math;
pub mod pairwise;
pub mod par;
pub mod partition;
pub mod preservers;
pub mod spanner;
pub mod sublinear;
pub mod subset;
pub mod verify;

pub use error::{Result, SpannerError};
pub use graph::{EdgeSet, Graph, Vertex, UNREACHABLE};
pub use spanner::{Rule, SpannerResult};
