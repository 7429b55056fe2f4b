//! Scaling benchmark: query counts of both solvers over a grid of `n`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::{baseline_angluin_valiant, BaselineStats};
use crate::concentration::{fit_line, LineFit};
use crate::cycle_join::{find_hamilton_cycle, SolverConfig};
use crate::error::Result;
use crate::graph::StoredGraph;
use crate::seed::derive;
use crate::stats::RunStats;

/// `min(1, c ln n / n)`.
pub fn edge_probability(n: usize, c: f64) -> f64 {
    (c * (n as f64).ln() / n as f64).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub ns: Vec<usize>,
    pub seeds_per_n: u64,
    pub c: f64,
    pub base_seed: u64,
    pub baseline: bool,
    pub parallel: bool,
    pub sample_factor: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            ns: (10..=14).map(|k| 1 << k).collect(),
            seeds_per_n: 20,
            c: 200.0,
            base_seed: 1,
            baseline: false,
            parallel: false,
            sample_factor: 40.0,
        }
    }
}

impl ScalingConfig {
    /// Graph and algorithm seeds of the `i`-th run at size `n`.
    pub fn seeds(&self, n: usize, i: u64) -> (u64, u64) {
        (derive(self.base_seed, &[n as u64, i, 0]), derive(self.base_seed, &[n as u64, i, 1]))
    }
}

/// One (n, seed) cell of the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub seed_index: u64,
    pub solver: RunStats,
    pub baseline: Option<BaselineStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeAggregate {
    pub n: usize,
    pub p: f64,
    pub runs: usize,
    pub failures: usize,
    pub mean_calls: f64,
    pub max_calls: u64,
    pub mean_calls_per_n: f64,
    pub max_calls_per_vertex: u64,
    pub mean_phase1_calls: f64,
    pub mean_phase2_calls: f64,
    pub mean_cycles: f64,
    pub mean_rotations: f64,
    pub max_exposed_per_n: f64,
    pub baseline_failures: Option<usize>,
    pub baseline_mean_calls: Option<f64>,
    pub baseline_mean_calls_per_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub config: ScalingConfig,
    pub sizes: Vec<SizeAggregate>,
    /// Log-log fit of mean solver calls against `n` (95% interval).
    pub slope: Option<LineFit>,
    pub baseline_slope: Option<LineFit>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

fn run_cell(config: &ScalingConfig, n: usize, i: u64) -> Result<RunRecord> {
    let (graph_seed, algo_seed) = config.seeds(n, i);
    let graph = StoredGraph::generate(n, edge_probability(n, config.c), graph_seed)?;
    let solver_config = SolverConfig { budget: None, sample_factor: config.sample_factor };
    let solver = match find_hamilton_cycle(&graph, algo_seed, &solver_config) {
        Ok((_, stats)) => stats,
        Err(failure) => failure.stats,
    };
    let baseline = config.baseline.then(|| baseline_angluin_valiant(&graph, algo_seed, None).1);
    Ok(RunRecord { n, seed_index: i, solver, baseline })
}

fn log_fit(points: &[(usize, f64)]) -> Option<LineFit> {
    let usable: Vec<_> = points.iter().filter(|(_, y)| y.is_finite() && *y > 0.0).collect();
    let x: Vec<f64> = usable.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let y: Vec<f64> = usable.iter().map(|(_, c)| c.ln()).collect();
    fit_line(&x, &y, 0.95).ok()
}

/// Runs the grid and aggregates. Individual solver failures are recorded,
/// not fatal.
pub fn scaling_benchmark(config: &ScalingConfig) -> Result<ScalingReport> {
    let cells: Vec<(usize, u64)> = config
        .ns
        .iter()
        .flat_map(|&n| (0..config.seeds_per_n).map(move |i| (n, i)))
        .collect();
    let records: Vec<RunRecord> = if config.parallel {
        cells.par_iter().map(|&(n, i)| run_cell(config, n, i)).collect::<Result<_>>()?
    } else {
        cells.iter().map(|&(n, i)| run_cell(config, n, i)).collect::<Result<_>>()?
    };

    let mut sizes = Vec::new();
    for &n in &config.ns {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.n == n).collect();
        let ok: Vec<&RunStats> = runs.iter().map(|r| &r.solver).filter(|s| s.outcome.is_success()).collect();
        let nf = n as f64;
        let baselines: Vec<&BaselineStats> = runs.iter().filter_map(|r| r.baseline.as_ref()).collect();
        let base_ok: Vec<&&BaselineStats> = baselines.iter().filter(|b| b.success).collect();
        let mean_calls = mean(ok.iter().map(|s| s.oracle_calls_total as f64));
        let baseline_mean = mean(base_ok.iter().map(|b| b.oracle_calls_total as f64));
        sizes.push(SizeAggregate {
            n,
            p: edge_probability(n, config.c),
            runs: runs.len(),
            failures: runs.len() - ok.len(),
            mean_calls,
            max_calls: ok.iter().map(|s| s.oracle_calls_total).max().unwrap_or(0),
            mean_calls_per_n: mean_calls / nf,
            max_calls_per_vertex: runs.iter().map(|r| r.solver.oracle_calls_max_per_vertex).max().unwrap_or(0),
            mean_phase1_calls: mean(ok.iter().map(|s| s.phase1_calls as f64)),
            mean_phase2_calls: mean(ok.iter().map(|s| s.phase2_calls as f64)),
            mean_cycles: mean(ok.iter().map(|s| s.cycles_in_cover as f64)),
            mean_rotations: mean(ok.iter().map(|s| s.phase2_rotations as f64)),
            max_exposed_per_n: ok.iter().map(|s| s.exposed_edges() as f64 / nf).fold(0.0, f64::max),
            baseline_failures: config.baseline.then(|| baselines.len() - base_ok.len()),
            baseline_mean_calls: config.baseline.then_some(baseline_mean),
            baseline_mean_calls_per_n: config.baseline.then_some(baseline_mean / nf),
        });
    }
    let slope = log_fit(&sizes.iter().map(|s| (s.n, s.mean_calls)).collect::<Vec<_>>());
    let baseline_slope = if config.baseline {
        log_fit(&sizes.iter().map(|s| (s.n, s.baseline_mean_calls.unwrap_or(f64::NAN))).collect::<Vec<_>>())
    } else {
        None
    };
    Ok(ScalingReport { config: config.clone(), sizes, slope, baseline_slope, records })
}

impl ScalingReport {
    /// One JSON object per run. Wall-clock times are dropped unless
    /// `timings` is set, so that reruns produce identical output.
    pub fn write_ndjson<W: Write>(&self, mut w: W, timings: bool) -> Result<()> {
        for record in &self.records {
            let mut value = serde_json::to_value(record).expect("plain data");
            if !timings {
                if let Some(solver) = value.get_mut("solver").and_then(|s| s.as_object_mut()) {
                    solver.remove("wall");
                }
            }
            serde_json::to_writer(&mut w, &value).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self).map_err(std::io::Error::from)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for size in &self.sizes {
            out.serialize(size).map_err(std::io::Error::from)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ScalingConfig {
        ScalingConfig { ns: vec![1024, 1536, 2048, 3072], seeds_per_n: 2, baseline: true, ..Default::default() }
    }

    #[test]
    fn probability_is_clamped() {
        assert_eq!(edge_probability(100, 200.0), 1.0);
        let p = edge_probability(1 << 14, 200.0);
        assert!((p - 200.0 * (16384f64).ln() / 16384.0).abs() < 1e-15);
    }

    #[test]
    fn report_is_deterministic() {
        let a = scaling_benchmark(&small()).unwrap();
        let b = scaling_benchmark(&ScalingConfig { parallel: true, ..small() }).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        a.write_ndjson(&mut x, false).unwrap();
        b.write_ndjson(&mut y, false).unwrap();
        assert_eq!(x, y);
        assert_eq!(String::from_utf8(x).unwrap().lines().count(), 8);
        let slope = a.slope.unwrap();
        assert!(slope.slope.is_finite());
        assert_eq!(a.sizes.len(), 4);
    }

    #[test]
    fn csv_has_one_row_per_size() {
        let r = scaling_benchmark(&ScalingConfig { ns: vec![1024], seeds_per_n: 1, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);
        assert!(r.slope.is_none());
    }
}
