//! Random-walk machinery and exact counting oracles for tight Hamilton cycles
//! in Dirac k-uniform hypergraphs.

pub mod cycles;
pub mod goodness;
pub mod hypergraph;
pub mod lp;
pub mod matching;
pub mod vset;
pub mod walk;

pub use hypergraph::{GraphError, GraphKind, KGraph, OrderedTuple, TightPath};
pub use vset::{Vertex, VertexSet};

/// Default node budget for exhaustive searches.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;
