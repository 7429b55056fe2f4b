//! Ground truth: checking a claimed Hamilton cycle, and exhaustive search
//! on tiny graphs.

use std::fmt;

use crate::cycle_join::HamiltonCycle;
use crate::error::{Error, Result};
use crate::graph::StoredGraph;
use crate::Vertex;

/// Largest graph [`brute_force_hamilton`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// The first reason a vertex order is not a Hamilton cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Graphs with fewer than 3 vertices have no Hamilton cycle.
    TooFewVertices(usize),
    VertexOutOfRange(Vertex),
    DuplicateVertex(Vertex),
    MissingVertex(Vertex),
    NonEdge(Vertex, Vertex),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices(n) => write!(f, "a graph on {n} vertices has no Hamilton cycle"),
            Violation::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex {v}"),
            Violation::MissingVertex(v) => write!(f, "missing vertex {v}"),
            Violation::NonEdge(u, v) => write!(f, "non-edge {{{u}, {v}}}"),
        }
    }
}

impl std::error::Error for Violation {}

/// Accepts `cycle` iff it lists every vertex exactly once and every
/// consecutive pair, including last to first, is an edge.
pub fn verify_hamilton_cycle(graph: &StoredGraph, cycle: &[Vertex]) -> Result<(), Violation> {
    let n = graph.n();
    if n < 3 {
        return Err(Violation::TooFewVertices(n));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        match seen.get_mut(v as usize) {
            None => return Err(Violation::VertexOutOfRange(v)),
            Some(true) => return Err(Violation::DuplicateVertex(v)),
            Some(s) => *s = true,
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Violation::MissingVertex(v as Vertex));
    }
    for (i, &u) in cycle.iter().enumerate() {
        let w = cycle[(i + 1) % n];
        if !graph.has_edge(u, w) {
            return Err(Violation::NonEdge(u, w));
        }
    }
    Ok(())
}

/// Exhaustive depth-first search from vertex 0. Refuses graphs with more
/// than [`BRUTE_FORCE_MAX_N`] vertices.
pub fn brute_force_hamilton(graph: &StoredGraph) -> Result<Option<HamiltonCycle>> {
    let n = graph.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::invalid(format!("brute force limited to {BRUTE_FORCE_MAX_N} vertices, got {n}")));
    }
    if n < 3 {
        return Ok(None);
    }
    let mut path = vec![0 as Vertex];
    let mut on_path = vec![false; n];
    on_path[0] = true;
    Ok(extend(graph, &mut path, &mut on_path).then(|| HamiltonCycle::new_unchecked(path)))
}

fn extend(graph: &StoredGraph, path: &mut Vec<Vertex>, on_path: &mut [bool]) -> bool {
    let end = *path.last().expect("nonempty");
    if path.len() == graph.n() {
        return graph.has_edge(end, path[0]);
    }
    for w in 0..graph.n() as Vertex {
        if on_path[w as usize] || !graph.has_edge(end, w) {
            continue;
        }
        on_path[w as usize] = true;
        path.push(w);
        if extend(graph, path, on_path) {
            return true;
        }
        path.pop();
        on_path[w as usize] = false;
    }
    false
}
