use hamcycle::seed::derive;
use hamcycle::verify::BRUTE_FORCE_MAX_N;
use hamcycle::{
    brute_force_hamilton, find_hamilton_cycle, verify_hamilton_cycle, SolverConfig, StoredGraph, Vertex, Violation,
};

/// Held-Karp over subsets containing vertex 0: `reach[mask][v]` says some
/// path from 0 visits exactly `mask` and ends at `v`.
fn hamiltonian_by_dp(g: &StoredGraph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    let full = (1usize << n) - 1;
    let mut reach = vec![0u32; 1 << n];
    reach[1] = 1;
    for mask in 1..=full {
        if mask & 1 == 0 || reach[mask] == 0 {
            continue;
        }
        for v in 0..n {
            if reach[mask] >> v & 1 == 0 {
                continue;
            }
            for &w in g.neighbors(v as Vertex) {
                let w = w as usize;
                if mask >> w & 1 == 0 {
                    reach[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    (1..n).any(|v| reach[full] >> v & 1 == 1 && g.has_edge(v as Vertex, 0))
}

#[test]
fn brute_force_agrees_with_dynamic_programming() {
    let mut hamiltonian = 0;
    for n in 3..=BRUTE_FORCE_MAX_N.min(10) {
        for (i, p) in [0.2, 0.4, 0.6, 0.8].into_iter().enumerate() {
            for s in 0..25 {
                let g = StoredGraph::generate(n, p, derive(11, &[n as u64, i as u64, s])).unwrap();
                let found = brute_force_hamilton(&g).unwrap();
                assert_eq!(found.is_some(), hamiltonian_by_dp(&g), "n = {n}, p = {p}, seed {s}");
                if let Some(cycle) = found {
                    assert_eq!(verify_hamilton_cycle(&g, cycle.vertices()), Ok(()));
                    hamiltonian += 1;
                }
            }
        }
    }
    assert!(hamiltonian > 100);
}

#[test]
fn brute_force_refuses_large_graphs() {
    let g = StoredGraph::generate(BRUTE_FORCE_MAX_N + 1, 0.5, 1).unwrap();
    assert!(brute_force_hamilton(&g).is_err());
}

#[test]
fn solver_successes_on_small_graphs_are_confirmed() {
    for i in 0..200 {
        let g = StoredGraph::generate(8, 0.5, derive(12, &[i])).unwrap();
        let truth = hamiltonian_by_dp(&g);
        for factor in [40.0, 1.0] {
            let config = SolverConfig { budget: None, sample_factor: factor };
            if let Ok((cycle, _)) = find_hamilton_cycle(&g, derive(12, &[i, 1]), &config) {
                assert!(truth);
                assert_eq!(verify_hamilton_cycle(&g, cycle.vertices()), Ok(()));
            }
        }
    }
}

#[test]
fn verifier_catches_every_corruption() {
    let n = 1024;
    let g = StoredGraph::generate(n, 1.0, 3).unwrap();
    let (cycle, _) = find_hamilton_cycle(&g, 3, &SolverConfig::default()).unwrap();
    let order = cycle.into_vertices();
    assert_eq!(verify_hamilton_cycle(&g, &order), Ok(()));

    let mut dup = order.clone();
    dup[5] = dup[6];
    assert!(matches!(verify_hamilton_cycle(&g, &dup), Err(Violation::DuplicateVertex(_))));

    let short = &order[..n - 1];
    assert_eq!(verify_hamilton_cycle(&g, short), Err(Violation::MissingVertex(order[n - 1])));

    let mut out_of_range = order.clone();
    out_of_range[0] = n as Vertex;
    assert!(matches!(verify_hamilton_cycle(&g, &out_of_range), Err(Violation::VertexOutOfRange(_))));

    // on a graph missing exactly one cycle edge, the cycle is rejected at it
    let (a, b) = (order[10], order[11]);
    let edges: Vec<_> = g.edges().filter(|&(u, v)| (u, v) != (a.min(b), a.max(b))).collect();
    let h = StoredGraph::from_edges(n, 1.0, 3, &edges).unwrap();
    assert_eq!(verify_hamilton_cycle(&h, &order).unwrap_err().to_string(), format!("non-edge {{{}, {}}}", a, b));
}
