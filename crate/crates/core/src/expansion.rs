//! Sampled check of the neighbourhood expansion of the bipartite view: a
//! set `A'` of `A`-vertices with `d = d(|A'|)` exposed neighbours each
//! should reach at least `|A'| d / 100` distinct `B`-vertices.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::StoredGraph;
use crate::matching::d_schedule;
use crate::oracle::{NeighborOracle, Partition, QueryBudget, Side};
use crate::seed::rng_stream;
use crate::Vertex;

/// Smallest acceptable ratio `|N_d(A')| / (|A'| d)`.
pub const EXPANSION_FACTOR: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub n: usize,
    /// Subsets actually examined.
    pub samples: usize,
    pub violations: usize,
    pub min_ratio: f64,
    pub min_ratio_size: usize,
    pub max_ratio: f64,
    /// Set when the oracle failed before all subsets were examined.
    pub partial: Option<String>,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.partial.is_none()
    }
}

/// Draws `samples` subsets `A'` of `A` with sizes log-uniform on `1..=|A|`
/// and measures their exposed neighbourhoods. The k-th exposed neighbour of
/// a vertex is the result of its k-th bipartite call and is shared by every
/// subset containing that vertex.
pub fn check_expansion(graph: &StoredGraph, algo_seed: u64, samples: usize) -> Result<ExpansionReport> {
    let n = graph.n();
    let part = Partition::balanced(n);
    let mut oracle = NeighborOracle::new(graph, algo_seed, QueryBudget::for_vertices(n));
    oracle.install_partition(part)?;
    let mut rng = rng_stream(algo_seed, 1);
    let mut exposed: Vec<Vec<Vertex>> = vec![Vec::new(); part.half()];
    let mut mark = vec![u32::MAX; n];

    let mut report = ExpansionReport {
        n,
        samples: 0,
        violations: 0,
        min_ratio: f64::INFINITY,
        min_ratio_size: 0,
        max_ratio: 0.0,
        partial: None,
    };
    let max_log = (part.half() as f64).ln();
    'outer: for round in 0..samples {
        let size = ((rng.random::<f64>() * max_log).exp().floor() as usize).clamp(1, part.half());
        let d = d_schedule(n, size)?;
        let depth = d.ceil() as usize;
        let subset = index::sample(&mut rng, part.half(), size);
        let mut reached = 0usize;
        for a in subset.iter() {
            while exposed[a].len() < depth {
                match oracle.bipartite_new_neighbor(a as Vertex, Side::B) {
                    Ok(b) => exposed[a].push(b),
                    Err(e) => {
                        report.partial = Some(e.to_string());
                        break 'outer;
                    }
                }
            }
            for &b in &exposed[a][..depth] {
                if mark[b as usize] != round as u32 {
                    mark[b as usize] = round as u32;
                    reached += 1;
                }
            }
        }
        let ratio = reached as f64 / (size as f64 * d);
        if ratio < EXPANSION_FACTOR {
            report.violations += 1;
        }
        if ratio < report.min_ratio {
            report.min_ratio = ratio;
            report.min_ratio_size = size;
        }
        report.max_ratio = report.max_ratio.max(ratio);
        report.samples += 1;
    }
    Ok(report)
}
