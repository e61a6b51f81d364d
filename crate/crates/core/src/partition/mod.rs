//! Robust partition systems: every agent is a candidate twice, never twice
//! against the same contender, and any agent subset splits into `b` classes
//! of mutual non-contenders.

mod coloring;
mod graph;
mod system;

pub use coloring::{edge_color, EdgeColoring};
pub use graph::{build_regular_bipartite_graph, BipartiteGraph, Hypergraph};
pub use system::{
    build_partition_system, is_conforming, partition_degree, PartitionDocument, PartitionSystem,
};
