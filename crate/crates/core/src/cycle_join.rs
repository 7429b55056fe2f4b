//! Phase 2: stitching the cycle cover of two matchings into one Hamilton
//! cycle, and the full solver pipeline.
//!
//! A path is grown greedily through the cover until it holds more than
//! `3n/4` vertices. Each remaining cycle is then spliced in once the path
//! end has a neighbour `v` in the first half whose predecessor is adjacent
//! to the cycle; until that happens the end is moved by long Pósa rotations
//! (pivot in the first half, new end in the second half). Closing the final
//! path uses the same loop with the path start in place of a cycle.
//!
//! Each vertex has its neighbours sampled at most once in this phase. The
//! set `U` of sampled vertices is never used as a new path end.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::StoredGraph;
use crate::matching::{fast_perfect_matching, Matching, MatchingStats};
use crate::oracle::{NeighborOracle, Partition, QueryBudget};
use crate::path_seq::{PathForest, PathSeq};
use crate::stats::{Outcome, Phase, RunStats, Step};
use crate::verify::verify_hamilton_cycle;
use crate::Vertex;

/// Disjoint cycles covering every vertex.
///
/// Cycles of length 2 stand for an edge used by both matchings; a cycle of
/// length 1 is the vertex left out of the bipartition for odd `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    cycles: Vec<Vec<Vertex>>,
    cycle_of: Vec<u32>,
    position: Vec<u32>,
}

impl CycleCover {
    /// Decomposes `m1 ∪ m2` into cycles by alternating between the two
    /// matchings. Cycles are ordered by their smallest vertex and each one
    /// starts there, followed by its `m1` partner.
    pub fn from_matchings(m1: &Matching, m2: &Matching) -> Result<Self> {
        let part = m1.partition();
        if part != m2.partition() {
            return Err(Error::invalid("matchings are over different bipartitions"));
        }
        if !m1.is_perfect() || !m2.is_perfect() {
            return Err(Error::invalid("both matchings must be perfect"));
        }
        let mut seen = vec![false; part.n()];
        let mut cycles = Vec::new();
        for a in part.a_side() {
            if seen[a as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = a;
            loop {
                let b = m1.partner(x).expect("perfect");
                seen[x as usize] = true;
                seen[b as usize] = true;
                cycle.push(x);
                cycle.push(b);
                x = m2.partner(b).expect("perfect");
                if x == a {
                    break;
                }
            }
            cycles.push(cycle);
        }
        if let Some(v) = part.set_aside() {
            cycles.push(vec![v]);
        }
        Self::from_cycles(part.n(), cycles)
    }

    /// Wraps explicit cycles, checking that they partition `0..n`.
    pub fn from_cycles(n: usize, cycles: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut cycle_of = vec![u32::MAX; n];
        let mut position = vec![0u32; n];
        for (i, cycle) in cycles.iter().enumerate() {
            if cycle.is_empty() {
                return Err(Error::invalid("empty cycle"));
            }
            for (j, &v) in cycle.iter().enumerate() {
                match cycle_of.get(v as usize) {
                    None => return Err(Error::invalid(format!("vertex {v} out of range"))),
                    Some(&c) if c != u32::MAX => return Err(Error::invalid(format!("vertex {v} covered twice"))),
                    _ => {}
                }
                cycle_of[v as usize] = i as u32;
                position[v as usize] = j as u32;
            }
        }
        if let Some(v) = cycle_of.iter().position(|&c| c == u32::MAX) {
            return Err(Error::invalid(format!("vertex {v} not covered")));
        }
        Ok(Self { cycles, cycle_of, position })
    }

    pub fn cycles(&self) -> &[Vec<Vertex>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycle_of(&self, v: Vertex) -> usize {
        self.cycle_of[v as usize] as usize
    }

    /// Number of cycles of each length; index `len` holds the count.
    pub fn length_counts(&self) -> Vec<usize> {
        let longest = self.cycles.iter().map(Vec::len).max().unwrap_or(0);
        let mut counts = vec![0; longest + 1];
        for c in &self.cycles {
            counts[c.len()] += 1;
        }
        counts
    }

    /// The cycle containing `v`, starting at `v` and ending at the vertex
    /// before it.
    fn cut_at(&self, v: Vertex) -> Vec<Vertex> {
        let cycle = &self.cycles[self.cycle_of(v)];
        let i = self.position[v as usize] as usize;
        let mut out = Vec::with_capacity(cycle.len());
        out.extend_from_slice(&cycle[i..]);
        out.extend_from_slice(&cycle[..i]);
        out
    }

    /// Checks that every cycle edge is a graph edge.
    pub fn check_edges(&self, graph: &StoredGraph) -> std::result::Result<(), String> {
        for cycle in self.cycles.iter().filter(|c| c.len() >= 2) {
            for (i, &u) in cycle.iter().enumerate() {
                let w = cycle[(i + 1) % cycle.len()];
                if !graph.has_edge(u, w) {
                    return Err(format!("cycle pair {{{u}, {w}}} is not an edge"));
                }
            }
        }
        Ok(())
    }
}

/// Vertices whose neighbourhood has been sampled in phase 2.
#[derive(Debug, Clone)]
pub struct UsedSet {
    flags: Vec<bool>,
    count: usize,
}

impl UsedSet {
    pub fn new(n: usize) -> Self {
        Self { flags: vec![false; n], count: 0 }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.flags[v as usize]
    }

    pub fn insert(&mut self, v: Vertex) {
        if !std::mem::replace(&mut self.flags[v as usize], true) {
            self.count += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// A Hamilton cycle as a cyclic vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonCycle(Vec<Vertex>);

impl HamiltonCycle {
    /// Wraps a vertex order without checking it.
    pub fn new_unchecked(order: Vec<Vertex>) -> Self {
        Self(order)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }
}

/// `k` calls of `new_neighbor(v)`, deduplicated in first-seen order.
pub fn sample_neighbors(oracle: &mut NeighborOracle<'_>, v: Vertex, k: usize) -> Result<Vec<Vertex>> {
    let mut seen = HashSet::with_capacity(k);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let w = oracle.new_neighbor(v)?;
        if seen.insert(w) {
            out.push(w);
        }
    }
    Ok(out)
}

/// Phase 2 counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StitchStats {
    pub greedy_steps: u64,
    pub rotations: u64,
    pub joins: u64,
}

/// The growing path together with the phase 2 bookkeeping.
pub struct Stitcher<'a, 'g> {
    oracle: &'a mut NeighborOracle<'g>,
    forest: PathForest,
    path: PathSeq,
    used: UsedSet,
    sample_size: usize,
    stats: StitchStats,
}

impl<'a, 'g> Stitcher<'a, 'g> {
    /// Starts from `initial` as the path.
    pub fn with_path(oracle: &'a mut NeighborOracle<'g>, initial: &[Vertex], sample_size: usize) -> Result<Self> {
        let n = oracle.graph().n();
        let mut forest = PathForest::new(n);
        let path = forest.from_sequence(initial)?;
        Ok(Self { oracle, forest, path, used: UsedSet::new(n), sample_size, stats: StitchStats::default() })
    }

    /// Starts from the first cycle of `cover`, cut at its first vertex.
    pub fn start(oracle: &'a mut NeighborOracle<'g>, cover: &CycleCover, sample_size: usize) -> Result<Self> {
        let first = cover.cycles().first().ok_or_else(|| Error::invalid("empty cover"))?;
        Self::with_path(oracle, first, sample_size)
    }

    pub fn path(&self) -> Vec<Vertex> {
        self.forest.to_list(&self.path)
    }

    pub fn path_len(&self) -> usize {
        self.path.len()
    }

    pub fn used(&self) -> &UsedSet {
        &self.used
    }

    pub fn stats(&self) -> &StitchStats {
        &self.stats
    }

    pub fn oracle(&self) -> &NeighborOracle<'g> {
        self.oracle
    }

    fn on_path(&self, v: Vertex) -> bool {
        self.forest.contains(&self.path, v)
    }

    fn half(&self, v: Vertex) -> bool {
        self.forest.half(&self.path, v).expect("caller checked membership")
    }

    fn pred(&self, v: Vertex) -> Option<Vertex> {
        self.forest.pred(&self.path, v).expect("caller checked membership")
    }

    fn sample(&mut self, v: Vertex) -> Result<Vec<Vertex>> {
        debug_assert!(!self.used.contains(v), "neighbours of {v} sampled twice");
        self.used.insert(v);
        sample_neighbors(self.oracle, v, self.sample_size)
    }

    /// Appends whole cycles of `cover` until the path holds more than
    /// `3n/4` vertices. Returns the indices of the cycles still outside the
    /// path, in cover order.
    pub fn greedy_absorb(&mut self, cover: &CycleCover) -> Result<Vec<usize>> {
        let n = self.forest.capacity();
        while 4 * self.path.len() <= 3 * n {
            let end = self.path.end();
            let sample = self.sample(end)?;
            let v = *sample
                .iter()
                .find(|&&v| !self.on_path(v))
                .ok_or(Error::GaveUp(end))?;
            let piece = self.forest.from_sequence(&cover.cut_at(v))?;
            self.forest.append(&mut self.path, piece);
            self.stats.greedy_steps += 1;
        }
        let mut absorbed = vec![false; cover.len()];
        for v in self.forest.to_list(&self.path) {
            absorbed[cover.cycle_of(v)] = true;
        }
        Ok((0..cover.len()).filter(|&i| !absorbed[i]).collect())
    }

    /// Splices `cycle` (disjoint from the path) into the path, rotating the
    /// path end until a splice point is found.
    pub fn add_single_cycle(&mut self, cycle: &[Vertex]) -> Result<()> {
        let (&c_start, &c_end) = match (cycle.first(), cycle.last()) {
            (Some(s), Some(e)) => (s, e),
            _ => return Err(Error::invalid("empty cycle")),
        };
        let raw_start = self.sample(c_start)?;
        let mut near_start: Vec<Vertex> = raw_start.iter().copied().filter(|&u| self.on_path(u)).collect();
        near_start.sort_unstable();
        let near_end = if c_end == c_start { raw_start } else { self.sample(c_end)? };

        loop {
            let end = self.path.end();
            let sample = self.sample(end)?;
            let start = self.path.start();
            let pivot = sample.iter().copied().find(|&v| {
                v != start
                    && self.on_path(v)
                    && self.half(v)
                    && self.pred(v).is_some_and(|u| near_start.binary_search(&u).is_ok())
            });
            if let Some(v) = pivot {
                let q = self.pick_new_end(&near_end).ok_or(Error::SearchFailed("no second-half neighbour of the cycle end"))?;
                debug_assert!(self.oracle.graph().has_edge(self.pred(v).unwrap(), c_start));
                debug_assert!(self.oracle.graph().has_edge(c_end, q));
                self.splice(v, q, Some(cycle))?;
                self.stats.joins += 1;
                return Ok(());
            }
            self.rotate(&sample)?;
        }
    }

    /// Turns the spanning path into a Hamilton cycle.
    pub fn close_cycle(&mut self) -> Result<HamiltonCycle> {
        let start = self.path.start();
        let mut near_start = self.sample(start)?;
        near_start.retain(|&u| self.on_path(u));
        near_start.sort_unstable();
        loop {
            let sample = self.sample(self.path.end())?;
            let hit = sample.iter().copied().find(|&v| {
                self.on_path(v)
                    && self.half(v)
                    && self
                        .forest
                        .succ(&self.path, v)
                        .unwrap()
                        .is_some_and(|w| near_start.binary_search(&w).is_ok())
            });
            if let Some(v) = hit {
                let after = self.forest.succ(&self.path, v)?.expect("v is not the end");
                let tail = self.forest.split_before(&mut self.path, after)?;
                let mut order = self.forest.to_list(&self.path);
                order.extend(self.forest.to_list_reversed(&tail));
                return Ok(HamiltonCycle(order));
            }
            self.rotate(&sample)?;
        }
    }

    /// First `q` in `candidates` on the second half of the path whose
    /// predecessor has not been sampled.
    fn pick_new_end(&self, candidates: &[Vertex]) -> Option<Vertex> {
        candidates.iter().copied().find(|&q| {
            self.on_path(q) && !self.half(q) && self.pred(q).is_some_and(|u| !self.used.contains(u))
        })
    }

    /// One long rotation driven by the end's neighbour sample.
    fn rotate(&mut self, end_sample: &[Vertex]) -> Result<()> {
        let start = self.path.start();
        let v = end_sample
            .iter()
            .copied()
            .find(|&v| {
                v != start && self.on_path(v) && self.half(v) && self.pred(v).is_some_and(|u| !self.used.contains(u))
            })
            .ok_or(Error::SearchFailed("no first-half rotation pivot"))?;
        let before_v = self.pred(v).expect("v is not the start");
        let sample = self.sample(before_v)?;
        let q = self.pick_new_end(&sample).ok_or(Error::SearchFailed("no second-half rotation endpoint"))?;
        self.splice(v, q, None)?;
        self.stats.rotations += 1;
        Ok(())
    }

    /// Rewrites `(s..pred v)(v..pred q)(q..e)` as
    /// `(s..pred v)(cycle)(q..e)(v..pred q)`; `pred q` becomes the end.
    fn splice(&mut self, v: Vertex, q: Vertex, cycle: Option<&[Vertex]>) -> Result<()> {
        debug_assert!(self.forest.rank(&self.path, v)? < self.forest.rank(&self.path, q)?);
        debug_assert!(self.oracle.graph().has_edge(self.path.end(), v));
        let tail = self.forest.split_before(&mut self.path, q)?;
        let middle = self.forest.split_before(&mut self.path, v)?;
        if let Some(cycle) = cycle {
            let piece = self.forest.from_sequence(cycle)?;
            self.forest.append(&mut self.path, piece);
        }
        self.forest.append(&mut self.path, tail);
        self.forest.append(&mut self.path, middle);
        Ok(())
    }
}

/// Tuning of [`find_hamilton_cycle`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Oracle caps; `None` uses [`QueryBudget::for_vertices`].
    pub budget: Option<QueryBudget>,
    /// Phase 2 draws `ceil(sample_factor * ln n)` neighbours per sampled
    /// vertex.
    pub sample_factor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { budget: None, sample_factor: 40.0 }
    }
}

impl SolverConfig {
    pub fn sample_size(&self, n: usize) -> usize {
        ((self.sample_factor * (n as f64).ln()).ceil() as usize).max(1)
    }

    pub fn budget_for(&self, n: usize) -> QueryBudget {
        self.budget.unwrap_or_else(|| QueryBudget::for_vertices(n))
    }
}

/// A run that ended without a Hamilton cycle.
#[derive(Debug)]
pub struct SolveFailure {
    pub step: Step,
    pub error: Error,
    pub stats: RunStats,
}

impl SolveFailure {
    pub fn phase(&self) -> Phase {
        self.step.phase()
    }
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} during {:?}: {}", self.phase(), self.step, self.error)
    }
}

impl std::error::Error for SolveFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Finds a Hamilton cycle with two matchings and cycle stitching.
///
/// A failure is final for this `algo_seed`; callers may retry with another.
// the failure carries the full run statistics; it is produced once per run
#[allow(clippy::result_large_err)]
pub fn find_hamilton_cycle(
    graph: &StoredGraph,
    algo_seed: u64,
    config: &SolverConfig,
) -> std::result::Result<(HamiltonCycle, RunStats), SolveFailure> {
    let n = graph.n();
    let mut stats = RunStats::new(n, graph.p(), graph.seed(), algo_seed);
    stats.sample_size = config.sample_size(n);

    let fail = |step: Step, error: Error, mut stats: RunStats, oracle: Option<&NeighborOracle<'_>>| {
        if let Some(o) = oracle {
            stats.oracle_calls_total = o.total_calls();
            stats.oracle_calls_max_per_vertex = o.max_calls_per_vertex();
            stats.phase2_calls = o.total_calls() - stats.phase1_calls;
        }
        stats.outcome = Outcome::Failure {
            phase: step.phase(),
            step,
            kind: error.kind().to_string(),
            message: error.to_string(),
        };
        SolveFailure { step, error, stats }
    };

    if n < 4 {
        return Err(fail(Step::Setup, Error::invalid(format!("need at least 4 vertices, got {n}")), stats, None));
    }
    let mut oracle = NeighborOracle::new(graph, algo_seed, config.budget_for(n));
    oracle.install_partition(Partition::balanced(n)).expect("sizes agree");

    let clock = Instant::now();
    let mut matchings = Vec::with_capacity(2);
    for step in [Step::FirstMatching, Step::SecondMatching] {
        let mut ms = MatchingStats::default();
        let result = fast_perfect_matching(&mut oracle, &mut ms);
        stats.matchings.push(ms);
        match result {
            Ok(m) => matchings.push(m),
            Err(e) => {
                stats.phase1_calls = oracle.total_calls();
                return Err(fail(step, e, stats, Some(&oracle)));
            }
        }
        oracle.reset_exposure();
    }
    stats.phase1_calls = oracle.total_calls();
    stats.wall.phase1_ms = clock.elapsed().as_secs_f64() * 1e3;

    let clock = Instant::now();
    let cover = match CycleCover::from_matchings(&matchings[0], &matchings[1]) {
        Ok(c) => c,
        Err(e) => return Err(fail(Step::CycleCover, e, stats, Some(&oracle))),
    };
    debug_assert_eq!(cover.check_edges(graph), Ok(()));
    stats.cycles_in_cover = cover.len();

    let mut stitcher = Stitcher::start(&mut oracle, &cover, stats.sample_size).expect("cover is nonempty");
    let mut step = Step::Greedy;
    let result: Result<HamiltonCycle> = (|| {
        let remaining = stitcher.greedy_absorb(&cover)?;
        step = Step::AddCycle;
        for i in remaining {
            stitcher.add_single_cycle(&cover.cycles()[i])?;
        }
        step = Step::Close;
        stitcher.close_cycle()
    })();
    let s = stitcher.stats().clone();
    stats.greedy_steps = s.greedy_steps;
    stats.phase2_rotations = s.rotations;
    stats.joins = s.joins;
    stats.used_vertices = stitcher.used().len();
    drop(stitcher);
    let cycle = match result {
        Ok(c) => c,
        Err(e) => return Err(fail(step, e, stats, Some(&oracle))),
    };
    stats.wall.phase2_ms = clock.elapsed().as_secs_f64() * 1e3;
    stats.oracle_calls_total = oracle.total_calls();
    stats.oracle_calls_max_per_vertex = oracle.max_calls_per_vertex();
    stats.phase2_calls = oracle.total_calls() - stats.phase1_calls;

    if let Err(v) = verify_hamilton_cycle(graph, cycle.vertices()) {
        panic!("solver produced an invalid cycle: {v}");
    }
    Ok((cycle, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize, seed: u64) -> StoredGraph {
        StoredGraph::generate(n, 1.0, seed).unwrap()
    }

    fn oracle_on(g: &StoredGraph, seed: u64) -> NeighborOracle<'_> {
        NeighborOracle::new(g, seed, QueryBudget::unlimited())
    }

    #[test]
    fn identical_matchings_give_two_cycles() {
        let part = Partition::balanced(8);
        let pairs = [(0, 4), (1, 5), (2, 6), (3, 7)];
        let m = Matching::from_pairs(part, &pairs).unwrap();
        let cover = CycleCover::from_matchings(&m, &m).unwrap();
        assert_eq!(cover.len(), 4);
        assert!(cover.cycles().iter().all(|c| c.len() == 2));
        assert_eq!(cover.cycles()[0], vec![0, 4]);
    }

    #[test]
    fn crossed_matchings_give_one_four_cycle() {
        let part = Partition::balanced(4);
        let m1 = Matching::from_pairs(part, &[(0, 2), (1, 3)]).unwrap();
        let m2 = Matching::from_pairs(part, &[(0, 3), (1, 2)]).unwrap();
        let cover = CycleCover::from_matchings(&m1, &m2).unwrap();
        assert_eq!(cover.cycles(), &[vec![0, 2, 1, 3]]);
    }

    #[test]
    fn odd_n_adds_singleton() {
        let part = Partition::balanced(5);
        let m = Matching::from_pairs(part, &[(0, 2), (1, 3)]).unwrap();
        let cover = CycleCover::from_matchings(&m, &m).unwrap();
        assert_eq!(cover.cycles().last().unwrap(), &vec![4]);
        assert_eq!(cover.length_counts(), vec![0, 1, 2]);
    }

    #[test]
    fn cover_rejects_imperfect_matchings() {
        let part = Partition::balanced(4);
        let m1 = Matching::from_pairs(part, &[(0, 2)]).unwrap();
        let m2 = Matching::from_pairs(part, &[(0, 2), (1, 3)]).unwrap();
        assert!(matches!(CycleCover::from_matchings(&m1, &m2), Err(Error::InvalidArgument(_))));
        assert!(CycleCover::from_cycles(3, vec![vec![0, 1]]).is_err());
        assert!(CycleCover::from_cycles(3, vec![vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn sampling_deduplicates() {
        let g = StoredGraph::from_edges(2, 1.0, 0, &[(0, 1)]).unwrap();
        let mut ok = 0;
        for seed in 0..50 {
            let mut oracle = oracle_on(&g, seed);
            // the only arc out of 0 exists with probability 1/2
            if let Ok(s) = sample_neighbors(&mut oracle, 0, 5) {
                assert_eq!(s, vec![1]);
                ok += 1;
            }
        }
        assert!(ok > 0);
        let g = complete(200, 1);
        let mut oracle = oracle_on(&g, 3);
        let s = sample_neighbors(&mut oracle, 0, 20).unwrap();
        assert!(s.len() <= 20);
        assert_eq!(s.iter().collect::<HashSet<_>>().len(), s.len());
    }

    #[test]
    fn greedy_is_idle_on_a_spanning_cycle() {
        let g = complete(12, 2);
        let cover = CycleCover::from_cycles(12, vec![(0..12).collect()]).unwrap();
        let mut oracle = oracle_on(&g, 1);
        let mut st = Stitcher::start(&mut oracle, &cover, 5).unwrap();
        assert!(st.greedy_absorb(&cover).unwrap().is_empty());
        assert_eq!(st.stats().greedy_steps, 0);
        assert_eq!(st.oracle().total_calls(), 0);
    }

    #[test]
    fn greedy_absorbs_second_half_cycle() {
        let n = 200;
        let g = complete(n, 4);
        let cycles = vec![(0..100).collect(), (100..200).collect()];
        let cover = CycleCover::from_cycles(n, cycles).unwrap();
        let mut oracle = oracle_on(&g, 9);
        let mut st = Stitcher::start(&mut oracle, &cover, 40).unwrap();
        let rest = st.greedy_absorb(&cover).unwrap();
        assert!(rest.is_empty());
        assert_eq!(st.stats().greedy_steps, 1);
        let path = st.path();
        assert_eq!(path.len(), n);
        // the absorbed cycle is entered at v and ends at the vertex before v
        let v = path[100];
        let last = path[n - 1];
        assert_eq!(last, if v == 100 { 199 } else { v - 1 });
    }

    fn assert_path_valid(g: &StoredGraph, path: &[Vertex]) {
        for w in path.windows(2) {
            assert!(g.has_edge(w[0], w[1]), "{w:?}");
        }
    }

    #[test]
    fn add_cycle_keeps_a_valid_path() {
        let n = 400;
        let g = StoredGraph::generate(n, 0.5, 6).unwrap();
        // a long path and one extra cycle found by brute search of edges
        let mut seq: Vec<Vertex> = vec![0];
        let mut left: Vec<Vertex> = (1..n as Vertex).collect();
        while seq.len() < 390 {
            let end = *seq.last().unwrap();
            let i = left.iter().position(|&w| g.has_edge(end, w)).unwrap();
            seq.push(left.remove(i));
        }
        let mut cyc = vec![left.remove(0)];
        while !left.is_empty() {
            let end = *cyc.last().unwrap();
            let i = left.iter().position(|&w| g.has_edge(end, w)).unwrap();
            cyc.push(left.remove(i));
        }
        let mut done = 0;
        for seed in 0..10 {
            let mut oracle = NeighborOracle::new(&g, seed, QueryBudget::unlimited());
            let mut st = Stitcher::with_path(&mut oracle, &seq, 100).unwrap();
            if st.add_single_cycle(&cyc).is_ok() {
                let p = st.path();
                assert_eq!(p.len(), n);
                assert_path_valid(&g, &p);
                let mut sorted = p.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, (0..n as Vertex).collect::<Vec<_>>());
                done += 1;
            }
        }
        assert!(done >= 8, "{done}");
    }

    #[test]
    fn rotation_permutes_path() {
        let n = 300;
        let g = complete(n, 8);
        let seq: Vec<Vertex> = (0..n as Vertex).collect();
        let mut oracle = oracle_on(&g, 2);
        let mut st = Stitcher::with_path(&mut oracle, &seq, 50).unwrap();
        let sample = st.sample(st.path.end()).unwrap();
        st.rotate(&sample).unwrap();
        let p = st.path();
        assert_ne!(p, seq);
        assert_path_valid(&g, &p);
        let mut sorted = p;
        sorted.sort_unstable();
        assert_eq!(sorted, seq);
        assert_eq!(st.stats().rotations, 1);
    }

    #[test]
    fn close_on_k4_all_paths() {
        let g = complete(4, 0);
        let mut perms = Vec::new();
        for a in 0..4u32 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = vec![a, b, c, d];
                        let mut s = p.clone();
                        s.sort_unstable();
                        s.dedup();
                        if s.len() == 4 {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        assert_eq!(perms.len(), 24);
        let mut closed = 0;
        for p in &perms {
            for seed in 0..5 {
                let mut oracle = oracle_on(&g, seed);
                let mut st = Stitcher::with_path(&mut oracle, p, 3).unwrap();
                match st.close_cycle() {
                    Ok(c) => {
                        verify_hamilton_cycle(&g, c.vertices()).unwrap();
                        closed += 1;
                    }
                    Err(e) => assert!(matches!(
                        e,
                        Error::OracleExhausted(_) | Error::SearchFailed(_)
                    )),
                }
            }
        }
        assert!(closed > 0);
    }

    #[test]
    fn solves_dense_graphs() {
        for (n, p, seed) in [(1024, 1.0, 1), (1025, 1.0, 2), (1500, 0.8, 3)] {
            let g = StoredGraph::generate(n, p, seed).unwrap();
            let (cycle, stats) = find_hamilton_cycle(&g, seed + 10, &SolverConfig::default()).unwrap();
            assert_eq!(cycle.len(), n);
            verify_hamilton_cycle(&g, cycle.vertices()).unwrap();
            assert!(stats.outcome.is_success());
            assert_eq!(stats.matchings.len(), 2);
            assert!(stats.oracle_calls_max_per_vertex as f64 <= (100.0 * (n as f64).ln()).ceil());
        }
    }

    #[test]
    fn empty_graph_fails_in_phase_one() {
        let g = StoredGraph::generate(20, 0.0, 1).unwrap();
        let err = find_hamilton_cycle(&g, 1, &SolverConfig::default()).unwrap_err();
        assert_eq!(err.phase(), Phase::Phase1);
        assert!(matches!(err.error, Error::OracleExhausted(_)));
        assert_eq!(err.stats.outcome.phase(), Some(Phase::Phase1));
    }

    #[test]
    fn tiny_graphs_are_rejected() {
        let g = complete(3, 0);
        let err = find_hamilton_cycle(&g, 0, &SolverConfig::default()).unwrap_err();
        assert_eq!(err.step, Step::Setup);
    }

    #[test]
    fn deterministic_given_seeds() {
        let g = StoredGraph::generate(2000, 0.5, 5).unwrap();
        let a = find_hamilton_cycle(&g, 7, &SolverConfig::default()).unwrap();
        let b = find_hamilton_cycle(&g, 7, &SolverConfig::default()).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1.oracle_calls_total, b.1.oracle_calls_total);
    }
}
