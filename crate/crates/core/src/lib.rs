//! Deterministic impartial selection and assignment with weighted votes.
//!
//! Agents are numbered `1..=n`. A [`WeightMatrix`] holds non-negative vote
//! weights `A[i][j]` from voter `i` to candidate `j` with a zero diagonal.
//! [`select_k`] picks at most `k` agents from a [`PartitionSystem`] and
//! [`assign_k`] fills `m` jobs of capacity `k`; in both, no agent can change
//! their own outcome by changing their votes. [`gen_select`] and
//! [`gen_assign`] extend both to sizes without a partition system by padding
//! with dummy agents.
//!
//! ```
//! use impartial::{build_partition_system, select_k, WeightMatrix};
//!
//! let a = WeightMatrix::from_triplets(9, [(4, 1, 2.0), (1, 5, 3.0)]).unwrap();
//! let ps = build_partition_system(9, 6).unwrap();
//! let r = select_k(&a, 6, &ps).unwrap();
//! assert!(r.selected.len() <= 6);
//! ```

pub mod assignment;
pub mod error;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod ratio;
pub mod selection;
pub mod weights;

pub use assignment::{
    assign_k, assignment_params, best_partial_assignment, gen_assign, gen_assign_with,
    guarantee_alpha_assign, Assignment, AssignmentResult,
};
pub use error::{Error, Result};
pub use partition::{
    build_partition_system, build_regular_bipartite_graph, edge_color, is_conforming,
    partition_degree, BipartiteGraph, EdgeColoring, Hypergraph, PartitionDocument,
    PartitionSystem,
};
pub use ratio::{alpha_decimal, Alpha, ScoreRatio};
pub use selection::{
    gen_select, gen_select_with, guarantee_alpha, modified_scores, select_k, selection_params,
    ModifiedScoreTable, ReductionParams, SelectionResult,
};
pub use weights::{total_score, Agent, AgentSet, InstanceTuple, WeightMatrix};
