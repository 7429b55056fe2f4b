//! Seeded `G(n, p)` instances stored as randomly ordered adjacency lists.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Geometric;

use crate::error::{Error, Result};
use crate::seed::rng_stream;
use crate::Vertex;

const TOPOLOGY_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;

/// An immutable random graph.
///
/// Adjacency lists are stored in CSR form and each list is independently
/// shuffled with randomness derived from the graph seed. A second, sorted copy
/// of the lists serves as the edge-membership index used by verification.
#[derive(Debug, Clone)]
pub struct StoredGraph {
    n: usize,
    p: f64,
    seed: u64,
    offsets: Vec<usize>,
    adj: Vec<Vertex>,
    sorted: Vec<Vertex>,
}

impl StoredGraph {
    /// Samples `G(n, p)`.
    ///
    /// Edges are drawn by geometric skipping over the `n(n-1)/2` unordered
    /// pairs in lexicographic order, so the cost is `O(n + m)`.
    pub fn generate(n: usize, p: f64, seed: u64) -> Result<Self> {
        check_params(n, p)?;
        let edges = sample_edges(n, p, seed);
        Ok(Self::build(n, p, seed, &edges))
    }

    /// Builds a graph from an explicit edge list. The list is canonicalised
    /// (each pair as `(min, max)`, sorted); self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, p: f64, seed: u64, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        check_params(n, p)?;
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!("edge {{{u}, {v}}} out of range for n = {n}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {{{}, {}}}", w[0].0, w[0].1)));
        }
        Ok(Self::build(n, p, seed, &canon))
    }

    /// `edges` must be canonical and sorted lexicographically. Filling the
    /// lists in that order leaves every list sorted, which gives the
    /// membership index for free.
    fn build(n: usize, p: f64, seed: u64, edges: &[(Vertex, Vertex)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut sorted = vec![0 as Vertex; 2 * edges.len()];
        for &(u, v) in edges {
            sorted[fill[u as usize]] = v;
            fill[u as usize] += 1;
            sorted[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        debug_assert!((0..n).all(|v| sorted[offsets[v]..offsets[v + 1]].is_sorted()));

        let mut adj = sorted.clone();
        let mut rng = rng_stream(seed, SHUFFLE_STREAM);
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].shuffle(&mut rng);
        }
        Self { n, p, seed, offsets, adj, sorted }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Adjacency list of `v` in its stored (shuffled) order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    fn sorted_neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.sorted[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge membership by binary search in the shorter sorted list.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.sorted_neighbors(a).binary_search(&b).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n as Vertex).flat_map(move |u| {
            let list = self.sorted_neighbors(u);
            let start = list.partition_point(|&w| w < u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    /// Writes the graph file format: a header `n p graph_seed`, then one
    /// `u v` line per edge with `u < v` in ascending order.
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        writeln!(w, "{} {} {}", self.n, self.p, self.seed)?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the graph file format. Adjacency order is not part of the
    /// format; it is re-derived from the seed in the header.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(1, "header must be `n p graph_seed`"));
        }
        let n: usize = fields[0].parse().map_err(|_| parse_err(1, "bad vertex count"))?;
        let p: f64 = fields[1].parse().map_err(|_| parse_err(1, "bad edge probability"))?;
        let seed: u64 = fields[2].parse().map_err(|_| parse_err(1, "bad graph seed"))?;
        check_params(n, p)?;

        let mut edges = Vec::new();
        for (i, line) in lines {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut next = || -> Result<Vertex> {
                it.next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(line_no, "expected `u v`"))
            };
            let (u, v) = (next()?, next()?);
            if u >= v {
                return Err(parse_err(line_no, "edges must be written as `u v` with u < v"));
            }
            edges.push((u, v));
        }
        Self::from_edges(n, p, seed, &edges)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse { line, msg: msg.to_string() }
}

fn check_params(n: usize, p: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 vertices, got {n}")));
    }
    if n >= Vertex::MAX as usize {
        return Err(Error::invalid(format!("too many vertices: {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Lexicographic walk over unordered pairs, jumping geometric gaps.
fn sample_edges(n: usize, p: f64, seed: u64) -> Vec<(Vertex, Vertex)> {
    if p == 0.0 {
        return Vec::new();
    }
    let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let mut edges = Vec::with_capacity((pairs * p * 1.01 + 16.0) as usize);
    let gap = Geometric::new(p).expect("p in (0, 1]");
    let mut rng = rng_stream(seed, TOPOLOGY_STREAM);
    let n64 = n as u64;

    // Position (u, v); v == u means "before the first pair of row u".
    let mut u: u64 = 0;
    let mut v: u64 = 0;
    loop {
        let skip: u64 = rng.sample(gap);
        v = v.saturating_add(skip).saturating_add(1);
        while v >= n64 {
            let overflow = v - n64;
            u += 1;
            if u + 1 >= n64 {
                return edges;
            }
            v = (u + 1).saturating_add(overflow);
        }
        edges.push((u as Vertex, v as Vertex));
    }
}
