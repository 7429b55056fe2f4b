//! Reference solver: a greedy random walk with long Pósa rotations, kept for
//! comparing query growth against the linear solver. It is a reading of a
//! sketch, not a tuned implementation.
//!
//! The path grows by querying a random neighbour of its end. A neighbour
//! already on the path at distance at least `n/2` from the end closes a
//! long cycle, which is detached while the walk continues from the vertex
//! before it. The cycle is spliced back in, entered at the hit vertex, as
//! soon as a query from the end lands on it. Any other repeat query is
//! wasted. The run ends when the path spans the graph and its end sees the
//! start.

use serde::{Deserialize, Serialize};

use crate::cycle_join::HamiltonCycle;
use crate::error::{Error, Result};
use crate::graph::StoredGraph;
use crate::oracle::{NeighborOracle, QueryBudget};
use crate::path_seq::{PathForest, PathSeq};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BaselineStats {
    pub n: usize,
    pub graph_seed: u64,
    pub algo_seed: u64,
    pub success: bool,
    pub error: Option<String>,
    pub oracle_calls_total: u64,
    pub oracle_calls_max_per_vertex: u64,
    pub detachments: u64,
    pub reattachments: u64,
    pub wasted_queries: u64,
}

/// Default total query cap `ceil(40 n ln n)`. There is no per-vertex cap.
pub fn default_budget(n: usize) -> QueryBudget {
    let total = (40.0 * n as f64 * (n as f64).ln()).ceil() as u64;
    QueryBudget { per_vertex_cap: u64::MAX, total_cap: total.max(1) }
}

pub fn baseline_angluin_valiant(
    graph: &StoredGraph,
    algo_seed: u64,
    budget: Option<QueryBudget>,
) -> (Option<HamiltonCycle>, BaselineStats) {
    let n = graph.n();
    let mut oracle = NeighborOracle::new(graph, algo_seed, budget.unwrap_or_else(|| default_budget(n)));
    let mut stats = BaselineStats { n, graph_seed: graph.seed(), algo_seed, ..Default::default() };
    let result = if n < 4 {
        Err(Error::invalid(format!("need at least 4 vertices, got {n}")))
    } else {
        walk(&mut oracle, &mut stats)
    };
    stats.oracle_calls_total = oracle.total_calls();
    stats.oracle_calls_max_per_vertex = oracle.max_calls_per_vertex();
    match result {
        Ok(cycle) => {
            stats.success = true;
            (Some(cycle), stats)
        }
        Err(e) => {
            stats.error = Some(e.to_string());
            (None, stats)
        }
    }
}

fn walk(oracle: &mut NeighborOracle<'_>, stats: &mut BaselineStats) -> Result<HamiltonCycle> {
    let n = oracle.graph().n();
    let mut forest = PathForest::new(n);
    let mut path = forest.from_sequence(&[0])?;
    let mut detached: Option<PathSeq> = None;

    loop {
        let end = path.end();
        let w = oracle.new_neighbor(end)?;
        if let Some(mut cycle) = detached.take_if(|c| forest.contains(c, w)) {
            if w != cycle.start() {
                let from_w = forest.split_before(&mut cycle, w)?;
                cycle = forest.concat(from_w, cycle);
            }
            forest.append(&mut path, cycle);
            stats.reattachments += 1;
        } else if !forest.is_attached(w) {
            let single = forest.from_sequence(&[w])?;
            forest.append(&mut path, single);
        } else if path.len() == n && w == path.start() {
            return Ok(HamiltonCycle::new_unchecked(forest.to_list(&path)));
        } else if detached.is_none() && w != path.start() && path.len() - forest.rank(&path, w)? >= n / 2 {
            detached = Some(forest.split_before(&mut path, w)?);
            stats.detachments += 1;
        } else {
            stats.wasted_queries += 1;
        }
    }
}
