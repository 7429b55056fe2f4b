//! Phase 1: random perfect matchings of the bipartition in `O(n)` queries.
//!
//! Unmatched `B`-vertices are processed in ascending order. Each one starts
//! an alternating random walk: ask for a random `A`-neighbour `w`; if `w` is
//! free, match and stop; otherwise steal `w` from its partner `u` and continue
//! from `u`. To shorten the walks every free `A`-vertex keeps a growing
//! sample of `B`-neighbours (its d-neighbourhood, depth given by
//! [`d_schedule`]); a walk that reaches a `B`-vertex in one of these samples
//! ends there immediately.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{NeighborOracle, Partition, Side};
use crate::Vertex;

const NONE: Vertex = Vertex::MAX;

/// `min(sqrt(n / t), ln n)`: exposure depth while `t` `A`-vertices remain
/// unmatched, with `n` the total vertex count.
pub fn d_schedule(n: usize, t: usize) -> Result<f64> {
    if t == 0 || t > n {
        return Err(Error::invalid(format!("d_schedule needs 1 <= t <= n, got t = {t}, n = {n}")));
    }
    let n = n as f64;
    Ok((n / t as f64).sqrt().min(n.ln()))
}

/// A partial matching between the two sides of a [`Partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    partition: Partition,
    partner: Vec<Vertex>,
    size: usize,
    free_a: Vec<Vertex>,
    free_a_pos: Vec<u32>,
}

impl Matching {
    pub fn empty(partition: Partition) -> Self {
        let h = partition.half();
        Self {
            partition,
            partner: vec![NONE; partition.n()],
            size: 0,
            free_a: partition.a_side().collect(),
            free_a_pos: (0..h as u32).collect(),
        }
    }

    /// Builds a matching from explicit `(a, b)` pairs.
    pub fn from_pairs(partition: Partition, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut m = Self::empty(partition);
        for &(a, b) in pairs {
            if partition.side(a) != Side::A || partition.side(b) != Side::B {
                return Err(Error::invalid(format!("pair ({a}, {b}) does not cross the bipartition")));
            }
            if m.partner(a).is_some() || m.partner(b).is_some() {
                return Err(Error::invalid(format!("pair ({a}, {b}) reuses a matched vertex")));
            }
            m.link(a, b);
            m.take_free_a(a);
        }
        Ok(m)
    }

    pub fn partition(&self) -> Partition {
        self.partition
    }

    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        let w = self.partner[v as usize];
        (w != NONE).then_some(w)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_perfect(&self) -> bool {
        self.size == self.partition.half()
    }

    /// Unmatched `A`-vertices, in no particular order.
    pub fn free_a(&self) -> &[Vertex] {
        &self.free_a
    }

    /// Matched pairs as `(a, b)` in ascending order of `a`.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.partition.a_side().filter_map(|a| self.partner(a).map(|b| (a, b)))
    }

    fn link(&mut self, a: Vertex, b: Vertex) {
        if self.partner[a as usize] == NONE {
            self.size += 1;
        }
        self.partner[a as usize] = b;
        self.partner[b as usize] = a;
    }

    fn take_free_a(&mut self, a: Vertex) {
        let i = self.free_a_pos[a as usize] as usize;
        let last = *self.free_a.last().expect("a is free");
        self.free_a.swap_remove(i);
        if last != a {
            self.free_a_pos[last as usize] = i as u32;
        }
        self.free_a_pos[a as usize] = u32::MAX;
    }
}

/// The d-neighbourhoods of the free `A`-vertices and their inverse.
#[derive(Debug, Clone)]
pub struct NeighborhoodState {
    depth: u32,
    half: usize,
    exposed: Vec<Vec<Vertex>>,
    inverse: Vec<Vec<Vertex>>,
}

impl NeighborhoodState {
    pub fn new(partition: Partition) -> Self {
        let h = partition.half();
        Self { depth: 0, half: h, exposed: vec![Vec::new(); h], inverse: vec![Vec::new(); h] }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `B`-vertices exposed so far by the free vertex `a`, in call order.
    pub fn exposed(&self, a: Vertex) -> &[Vertex] {
        &self.exposed[a as usize]
    }

    /// Free `A`-vertices whose neighbourhood contains `b` (with repeats if
    /// `b` was exposed more than once).
    pub fn exposers(&self, b: Vertex) -> &[Vertex] {
        &self.inverse[b as usize - self.half]
    }

    fn first_exposer(&self, b: Vertex) -> Option<Vertex> {
        self.exposers(b).iter().copied().min()
    }

    fn add(&mut self, a: Vertex, b: Vertex) {
        self.exposed[a as usize].push(b);
        self.inverse[b as usize - self.half].push(a);
    }

    /// Drops every entry of `a`, which has just been matched.
    fn purge(&mut self, a: Vertex) {
        for b in std::mem::take(&mut self.exposed[a as usize]) {
            let list = &mut self.inverse[b as usize - self.half];
            let i = list.iter().position(|&x| x == a).expect("inverse mirrors exposed");
            list.swap_remove(i);
        }
    }

    /// Checks the structural invariants against `m`.
    pub fn check(&self, m: &Matching) -> std::result::Result<(), String> {
        for a in m.partition.a_side() {
            let exposed = &self.exposed[a as usize];
            match m.partner(a) {
                Some(_) if !exposed.is_empty() => return Err(format!("matched {a} still exposes")),
                None if exposed.len() != self.depth as usize => {
                    return Err(format!("free {a} exposes {} at depth {}", exposed.len(), self.depth))
                }
                _ => {}
            }
        }
        let forward: usize = self.exposed.iter().map(Vec::len).sum();
        let backward: usize = self.inverse.iter().map(Vec::len).sum();
        if forward != backward {
            return Err(format!("{forward} exposed entries but {backward} inverse entries"));
        }
        for (i, list) in self.inverse.iter().enumerate() {
            let b = (i + self.half) as Vertex;
            for &a in list {
                let want = self.exposed[a as usize].iter().filter(|&&x| x == b).count();
                let have = list.iter().filter(|&&x| x == a).count();
                if want != have {
                    return Err(format!("inverse of {b} disagrees for {a}"));
                }
            }
        }
        Ok(())
    }
}

/// Counters for one run of [`fast_perfect_matching`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchingStats {
    /// Oracle calls (inner `new_neighbor` calls) made during the run.
    pub oracle_calls: u64,
    pub bipartite_calls: u64,
    /// Number of stealing steps over all walks.
    pub walk_steps: u64,
    /// Walks ended by a d-neighbourhood hit.
    pub neighborhood_hits: u64,
    /// Walks ended by querying a free `A`-vertex directly.
    pub direct_hits: u64,
    /// Neighbourhood entries exposed over the whole run.
    pub exposed_edges: u64,
    pub final_depth: u32,
    /// Stealing steps of the k-th walk; it starts with `half - k` free
    /// `A`-vertices.
    #[serde(skip)]
    pub walk_lengths: Vec<u32>,
}

/// Adds one edge to `m` with an alternating walk from the free `B`-vertex
/// `v`. The matching grows by exactly one.
pub fn increase_matching(
    oracle: &mut NeighborOracle<'_>,
    m: &mut Matching,
    v: Vertex,
    nbhd: &mut NeighborhoodState,
    stats: &mut MatchingStats,
) -> Result<()> {
    if m.partition.side(v) != Side::B || m.partner(v).is_some() {
        return Err(Error::invalid(format!("vertex {v} is not a free B-vertex")));
    }
    let mut v = v;
    let mut steps = 0u32;
    loop {
        if let Some(a) = nbhd.first_exposer(v) {
            m.link(a, v);
            m.take_free_a(a);
            nbhd.purge(a);
            stats.neighborhood_hits += 1;
            break;
        }
        stats.bipartite_calls += 1;
        let w = oracle.bipartite_new_neighbor(v, Side::A)?;
        debug_assert!(oracle.graph().has_edge(v, w));
        match m.partner(w) {
            None => {
                m.link(w, v);
                m.take_free_a(w);
                nbhd.purge(w);
                stats.direct_hits += 1;
                break;
            }
            Some(u) => {
                m.partner[u as usize] = NONE;
                m.link(w, v);
                v = u;
                steps += 1;
            }
        }
    }
    stats.walk_steps += u64::from(steps);
    stats.walk_lengths.push(steps);
    Ok(())
}

/// Raises the depth by one, exposing one more `B`-neighbour for every free
/// `A`-vertex.
pub fn expose_level(
    oracle: &mut NeighborOracle<'_>,
    m: &Matching,
    nbhd: &mut NeighborhoodState,
    stats: &mut MatchingStats,
) -> Result<()> {
    nbhd.depth += 1;
    for &a in &m.free_a {
        let b = oracle.bipartite_new_neighbor(a, Side::B)?;
        nbhd.add(a, b);
        stats.bipartite_calls += 1;
        stats.exposed_edges += 1;
    }
    Ok(())
}

/// Builds a perfect matching of the oracle's installed bipartition.
///
/// `stats` is filled in as the run progresses, so it is meaningful even
/// when an oracle error aborts the run.
pub fn fast_perfect_matching(oracle: &mut NeighborOracle<'_>, stats: &mut MatchingStats) -> Result<Matching> {
    let partition = oracle
        .partition()
        .ok_or_else(|| Error::invalid("no bipartition installed"))?;
    if partition.half() == 0 {
        return Err(Error::invalid("bipartition sides are empty"));
    }
    let n = oracle.graph().n();
    let ln_n = (n as f64).ln();
    let calls_before = oracle.total_calls();
    let mut m = Matching::empty(partition);
    let mut nbhd = NeighborhoodState::new(partition);
    stats.walk_lengths.reserve(partition.half());

    let result: Result<()> = (|| {
        for v in partition.b_side() {
            increase_matching(oracle, &mut m, v, &mut nbhd, stats)?;
            loop {
                let target = match m.free_a.len() {
                    0 => ln_n,
                    t => d_schedule(n, t)?,
                };
                if f64::from(nbhd.depth) >= target {
                    break;
                }
                expose_level(oracle, &m, &mut nbhd, stats)?;
            }
        }
        Ok(())
    })();
    stats.final_depth = nbhd.depth;
    stats.oracle_calls += oracle.total_calls() - calls_before;
    result?;
    debug_assert!(m.is_perfect());
    debug_assert!(m.pairs().all(|(a, b)| oracle.graph().has_edge(a, b)));
    Ok(m)
}
