//! Min-, max- and min/max-partitions of deterministic, input-consistent
//! labeled graphs in quadratic time.
//!
//! Every node `u` carries a label, and the strings readable backward from
//! `u` have a lexicographic infimum `min_u` and supremum `max_u`. The
//! partitions group nodes by equal extremum and order the groups.

pub mod bench;
pub mod classify;
pub mod driver;
pub mod generate;
pub mod graph;
pub mod io;
pub mod merge;
pub mod oracle;
pub mod reduce;

pub use driver::{first_reduction, max_partition, min_partition, min_partition_with_stats, minmax_partition, minmax_partition_with_stats, DriverError, LevelStats, MinMaxKey, MinMaxPartition};
pub use classify::{compute_tau, Tau, TauVector};
pub use graph::{from_dfa, Dfa, DfaError, DfaGraph, GraphError, LabeledGraph, NodeId, Symbol, ValidationReport, NO_NODE};
pub use merge::{compute_psi, merge_backward, merge_forward, seed_type2_partition, Extremum, MergeError, MergeStats, Partition, PsiVector};
pub use reduce::{build_reduced_graph, explore_minimum_type1, explore_minimum_type3, Direction, ExplorationRecord, ReduceError, ReducedGraph};
