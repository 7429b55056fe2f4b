//! Uniform, independent neighbour sampling over a stored random graph.
//!
//! Each undirected edge `{i, j}` is given a random orientation the first time
//! either endpoint's scan reaches it: `i -> j` only or `j -> i` only with
//! probability `1/2 - p/4` each, both or neither with probability `p/4` each.
//! The resulting directed graph has every arc present independently with
//! probability `p/2`. A query for `v` with `d` out-neighbours already
//! revealed returns one of them uniformly with probability `d/(n-1)`, and
//! otherwise scans ahead to the next out-arc. Every vertex of `V - v` is then
//! returned with probability exactly `1/(n-1)`.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{BudgetScope, Error, Result};
use crate::graph::StoredGraph;
use crate::seed::rng_stream;
use crate::Vertex;

/// Call limits for one oracle. Hitting either cap is an error, never a
/// silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryBudget {
    pub per_vertex_cap: u64,
    pub total_cap: u64,
}

impl QueryBudget {
    pub fn new(per_vertex_cap: u64, total_cap: u64) -> Result<Self> {
        if per_vertex_cap == 0 || total_cap == 0 {
            return Err(Error::invalid("query caps must be positive"));
        }
        Ok(Self { per_vertex_cap, total_cap })
    }

    /// `ceil(100 ln n)` calls per vertex and `60 n` calls in total.
    pub fn for_vertices(n: usize) -> Self {
        Self {
            per_vertex_cap: ((100.0 * (n as f64).ln()).ceil() as u64).max(1),
            total_cap: 60 * n as u64,
        }
    }

    pub fn unlimited() -> Self {
        Self { per_vertex_cap: u64::MAX, total_cap: u64::MAX }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
    /// The single vertex left out of the bipartition when `n` is odd.
    Aside,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
            Side::Aside => Side::Aside,
        }
    }
}

/// Balanced bipartition: `A = 0..h`, `B = h..2h` with `h = floor(n/2)`;
/// for odd `n` vertex `n - 1` is set aside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    half: usize,
}

impl Partition {
    pub fn balanced(n: usize) -> Self {
        Self { n, half: n / 2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of each side.
    pub fn half(&self) -> usize {
        self.half
    }

    pub fn side(&self, v: Vertex) -> Side {
        let v = v as usize;
        if v < self.half {
            Side::A
        } else if v < 2 * self.half {
            Side::B
        } else {
            Side::Aside
        }
    }

    pub fn a_side(&self) -> std::ops::Range<Vertex> {
        0..self.half as Vertex
    }

    pub fn b_side(&self) -> std::ops::Range<Vertex> {
        self.half as Vertex..(2 * self.half) as Vertex
    }

    pub fn set_aside(&self) -> Option<Vertex> {
        (self.n % 2 == 1).then_some((self.n - 1) as Vertex)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Orientation {
    LowToHigh,
    HighToLow,
    Both,
    Neither,
}

impl Orientation {
    fn allows(self, from: Vertex, to: Vertex) -> bool {
        match self {
            Orientation::Both => true,
            Orientation::Neither => false,
            Orientation::LowToHigh => from < to,
            Orientation::HighToLow => from > to,
        }
    }
}

fn edge_key(a: Vertex, b: Vertex) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (u64::from(lo) << 32) | u64::from(hi)
}

/// Stateful neighbour sampler over one graph.
///
/// Owns the algorithm-side randomness (`algo_seed`); the graph's randomness
/// is fixed by its own seed.
pub struct NeighborOracle<'g> {
    graph: &'g StoredGraph,
    budget: QueryBudget,
    rng: ChaCha8Rng,
    cursor: Vec<u32>,
    out_neighbors: Vec<Vec<Vertex>>,
    orientation: HashMap<u64, Orientation>,
    calls: Vec<u32>,
    total_calls: u64,
    bipartite_calls: u64,
    partition: Option<Partition>,
    resets: u32,
}

impl<'g> NeighborOracle<'g> {
    pub fn new(graph: &'g StoredGraph, algo_seed: u64, budget: QueryBudget) -> Self {
        let n = graph.n();
        Self {
            graph,
            budget,
            rng: rng_stream(algo_seed, 0),
            cursor: vec![0; n],
            out_neighbors: vec![Vec::new(); n],
            orientation: HashMap::new(),
            calls: vec![0; n],
            total_calls: 0,
            bipartite_calls: 0,
            partition: None,
            resets: 0,
        }
    }

    /// Oracle with the default budget for the graph's size.
    pub fn with_default_budget(graph: &'g StoredGraph, algo_seed: u64) -> Self {
        Self::new(graph, algo_seed, QueryBudget::for_vertices(graph.n()))
    }

    pub fn graph(&self) -> &'g StoredGraph {
        self.graph
    }

    pub fn budget(&self) -> QueryBudget {
        self.budget
    }

    /// Returns a neighbour of `v` distributed uniformly on `V - v`,
    /// independent of all earlier answers.
    pub fn new_neighbor(&mut self, v: Vertex) -> Result<Vertex> {
        let n = self.graph.n();
        if v as usize >= n {
            return Err(Error::invalid(format!("vertex {v} out of range")));
        }
        let vi = v as usize;
        if u64::from(self.calls[vi]) >= self.budget.per_vertex_cap {
            return Err(Error::BudgetExceeded {
                scope: BudgetScope::Vertex { vertex: v, cap: self.budget.per_vertex_cap },
            });
        }
        if self.total_calls >= self.budget.total_cap {
            return Err(Error::BudgetExceeded { scope: BudgetScope::Total { cap: self.budget.total_cap } });
        }
        self.calls[vi] += 1;
        self.total_calls += 1;

        let revealed = self.out_neighbors[vi].len();
        if revealed > 0 && self.rng.random_range(0..n - 1) < revealed {
            let pick = self.rng.random_range(0..revealed);
            return Ok(self.out_neighbors[vi][pick]);
        }

        let list = self.graph.neighbors(v);
        let p = self.graph.p();
        while let Some(&w) = list.get(self.cursor[vi] as usize) {
            self.cursor[vi] += 1;
            let rng = &mut self.rng;
            let orientation = *self
                .orientation
                .entry(edge_key(v, w))
                .or_insert_with(|| sample_orientation(rng, p));
            if orientation.allows(v, w) {
                debug_assert!(self.graph.has_edge(v, w));
                self.out_neighbors[vi].push(w);
                return Ok(w);
            }
        }
        Err(Error::OracleExhausted(v))
    }

    pub fn install_partition(&mut self, partition: Partition) -> Result<()> {
        if partition.n() != self.graph.n() {
            return Err(Error::invalid("partition does not match graph size"));
        }
        self.partition = Some(partition);
        Ok(())
    }

    pub fn partition(&self) -> Option<Partition> {
        self.partition
    }

    /// Repeats [`new_neighbor`](Self::new_neighbor) until the answer lies on
    /// `target`. The result is uniform on that side.
    pub fn bipartite_new_neighbor(&mut self, v: Vertex, target: Side) -> Result<Vertex> {
        let partition = self
            .partition
            .ok_or_else(|| Error::invalid("no bipartition installed"))?;
        if target == Side::Aside {
            return Err(Error::invalid("target side must be A or B"));
        }
        self.bipartite_calls += 1;
        loop {
            let w = self.new_neighbor(v)?;
            if partition.side(w) == target {
                return Ok(w);
            }
        }
    }

    /// Marks the end of one matching run. Exposure state lives with the
    /// caller, so nothing is cleared here: orientations, cursors, revealed
    /// out-neighbours and call counters persist to keep later answers
    /// uniform and the budgets global.
    pub fn reset_exposure(&mut self) {
        self.resets += 1;
    }

    pub fn resets(&self) -> u32 {
        self.resets
    }

    pub fn call_count(&self, v: Vertex) -> u64 {
        u64::from(self.calls[v as usize])
    }

    pub fn total_calls(&self) -> u64 {
        self.total_calls
    }

    pub fn bipartite_calls(&self) -> u64 {
        self.bipartite_calls
    }

    pub fn max_calls_per_vertex(&self) -> u64 {
        self.calls.iter().copied().max().map_or(0, u64::from)
    }

    /// Distinct out-neighbours of `v` revealed so far.
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_neighbors[v as usize]
    }
}

fn sample_orientation(rng: &mut ChaCha8Rng, p: f64) -> Orientation {
    let one_way = 0.5 - p / 4.0;
    let u: f64 = rng.random();
    if u < one_way {
        Orientation::LowToHigh
    } else if u < 2.0 * one_way {
        Orientation::HighToLow
    } else if u < 2.0 * one_way + p / 4.0 {
        Orientation::Both
    } else {
        Orientation::Neither
    }
}
