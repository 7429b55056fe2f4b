use hamcycle::baseline::baseline_angluin_valiant;
use hamcycle::bench::edge_probability;
use hamcycle::cycle_join::sample_neighbors;
use hamcycle::seed::derive;
use hamcycle::stats::Step;
use hamcycle::{find_hamilton_cycle, verify_hamilton_cycle, NeighborOracle, Outcome, QueryBudget, SolverConfig, StoredGraph};

const SEED: u64 = 9001;

#[test]
fn distinct_samples_follow_occupancy_formula() {
    let (n, k) = (1000usize, 200usize);
    let expected = (n - 1) as f64 * (1.0 - (1.0 - 1.0 / (n - 1) as f64).powi(k as i32));
    let runs = 300;
    let mut counts = Vec::with_capacity(runs);
    for r in 0..runs as u64 {
        let g = StoredGraph::generate(n, 1.0, derive(SEED, &[1, r])).unwrap();
        let mut oracle = NeighborOracle::new(&g, derive(SEED, &[1, r, 1]), QueryBudget::unlimited());
        let sample = sample_neighbors(&mut oracle, 0, k).unwrap();
        assert!(sample.len() <= k);
        counts.push(sample.len() as f64);
    }
    let m = counts.iter().sum::<f64>() / runs as f64;
    let var = counts.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (runs - 1) as f64;
    assert!((m - expected).abs() <= 3.0 * (var / runs as f64).sqrt(), "{m} vs {expected}");
}

#[test]
fn no_greedy_give_up_at_4096() {
    let n = 1 << 12;
    let p = edge_probability(n, 200.0);
    let mut failures = Vec::new();
    for s in 0..100 {
        let g = StoredGraph::generate(n, p, derive(SEED, &[2, s])).unwrap();
        match find_hamilton_cycle(&g, derive(SEED, &[2, s, 1]), &SolverConfig::default()) {
            Ok((cycle, stats)) => {
                assert_eq!(verify_hamilton_cycle(&g, cycle.vertices()), Ok(()));
                assert!(stats.used_vertices <= n / 8, "{} sampled vertices", stats.used_vertices);
            }
            Err(failure) => failures.push(failure.step),
        }
    }
    assert!(!failures.contains(&Step::Greedy), "{failures:?}");
    assert!(failures.len() <= 1, "{failures:?}");
}

/// Rotations stay far below the `O(n / log n)` allowance.
#[test]
fn rotation_count_at_8192() {
    let n = 1 << 13;
    let p = edge_probability(n, 200.0);
    let allowance = 4.0 * n as f64 / (40.0 * (n as f64).ln());
    let mut rotations = Vec::new();
    for s in 0..50 {
        let g = StoredGraph::generate(n, p, derive(SEED, &[3, s])).unwrap();
        let stats = match find_hamilton_cycle(&g, derive(SEED, &[3, s, 1]), &SolverConfig::default()) {
            Ok((_, stats)) => stats,
            Err(failure) => failure.stats,
        };
        if stats.outcome.phase() != Some(hamcycle::Phase::Phase1) {
            rotations.push(stats.phase2_rotations as f64);
        }
    }
    let k = rotations.len() as f64;
    assert!(k >= 49.0);
    let mean = rotations.iter().sum::<f64>() / k;
    let sd = (rotations.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt();
    let worst = rotations.iter().cloned().fold(0.0, f64::max);
    assert!(worst <= allowance + 3.0 * sd, "max {worst}, mean {mean}, allowance {allowance}");
}

#[test]
fn baseline_solves_and_costs_more_per_vertex_as_n_grows() {
    let mut per_n = Vec::new();
    for n in [1usize << 10, 1 << 13] {
        let p = edge_probability(n, 200.0);
        let mut total = 0.0;
        for s in 0..6 {
            let g = StoredGraph::generate(n, p, derive(SEED, &[4, n as u64, s])).unwrap();
            let (cycle, stats) = baseline_angluin_valiant(&g, derive(SEED, &[4, n as u64, s, 1]), None);
            let cycle = cycle.unwrap_or_else(|| panic!("{stats:?}"));
            assert_eq!(verify_hamilton_cycle(&g, cycle.vertices()), Ok(()));
            total += stats.oracle_calls_total as f64 / n as f64;
        }
        per_n.push(total / 6.0);
    }
    assert!(per_n[1] > per_n[0], "{per_n:?}");
}

#[test]
fn failures_carry_phase_and_stats() {
    let g = StoredGraph::generate(64, 0.0, 1).unwrap();
    let failure = find_hamilton_cycle(&g, 1, &SolverConfig::default()).unwrap_err();
    assert_eq!(failure.step, Step::FirstMatching);
    assert!(matches!(failure.stats.outcome, Outcome::Failure { ref kind, .. } if kind == "oracle-exhausted"));
    assert_eq!(failure.to_string().split(' ').next(), Some("phase1-failure"));

    let g = StoredGraph::generate(2048, 1.0, 2).unwrap();
    let tight = SolverConfig { budget: Some(QueryBudget::new(u64::MAX, 2048).unwrap()), ..Default::default() };
    let failure = find_hamilton_cycle(&g, 2, &tight).unwrap_err();
    assert!(failure.stats.oracle_calls_total <= 2048);
}
