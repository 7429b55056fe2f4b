//! Hamilton cycles in random graphs `G(n, p)` using a number of neighbour
//! queries linear in `n`.
//!
//! The solver runs in two phases. Phase 1 builds two random perfect matchings
//! of a balanced bipartition with short alternating random walks
//! ([`matching`]). Their union is a cover by disjoint cycles, and phase 2
//! ([`cycle_join`]) stitches the cycles into one Hamilton cycle using long
//! Pósa rotations on a path stored in a balanced sequence tree ([`path_seq`]).
//!
//! All access to the graph goes through [`oracle::NeighborOracle`], which
//! turns randomly ordered adjacency lists into a sampler whose answers are
//! uniform over `V - v` and independent across calls.
//!
//! ```
//! use hamcycle::{find_hamilton_cycle, verify_hamilton_cycle, SolverConfig, StoredGraph};
//!
//! let graph = StoredGraph::generate(1024, 1.0, 7).unwrap();
//! let (cycle, stats) = find_hamilton_cycle(&graph, 11, &SolverConfig::default()).unwrap();
//! assert!(verify_hamilton_cycle(&graph, cycle.vertices()).is_ok());
//! assert!(stats.outcome.is_success());
//! ```

pub mod baseline;
pub mod bench;
pub mod concentration;
pub mod cycle_join;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod path_seq;
pub mod seed;
pub mod stats;
pub mod verify;

/// Vertex identifier. Graphs are limited to `u32::MAX - 1` vertices.
pub type Vertex = u32;

pub use cycle_join::{find_hamilton_cycle, CycleCover, HamiltonCycle, SolveFailure, SolverConfig};
pub use error::{Error, Result};
pub use graph::StoredGraph;
pub use oracle::{NeighborOracle, Partition, QueryBudget, Side};
pub use path_seq::{PathForest, PathSeq};
pub use stats::{Outcome, Phase, RunStats};
pub use verify::{brute_force_hamilton, verify_hamilton_cycle, Violation};
