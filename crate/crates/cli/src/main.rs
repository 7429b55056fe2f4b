use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hamcycle::bench::{edge_probability, scaling_benchmark, ScalingConfig};
use hamcycle::expansion::check_expansion;
use hamcycle::seed::derive;
use hamcycle::{find_hamilton_cycle, verify_hamilton_cycle, QueryBudget, SolverConfig, StoredGraph, Vertex};

/// Hamilton cycles in random graphs with a linear number of neighbour queries.
#[derive(Parser)]
#[command(name = "hamcycle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p) and write it in the graph file format.
    Gen {
        #[command(flatten)]
        params: GenParams,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a Hamilton cycle in a stored or freshly generated graph.
    Solve {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 1)]
        algo_seed: u64,
        /// Extra attempts with fresh algorithm seeds after a failure.
        #[arg(long, default_value_t = 0)]
        retries: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Neighbours sampled per vertex during stitching, as a multiple of ln n.
        #[arg(long, default_value_t = 40.0)]
        sample_factor: f64,
        /// Cycle file (stdout if omitted).
        #[arg(long)]
        cycle_out: Option<PathBuf>,
        /// Run statistics as JSON.
        #[arg(long)]
        stats_out: Option<PathBuf>,
    },
    /// Check a cycle file against a graph file.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
    },
    /// Query-count scaling over a grid of graph sizes.
    Bench {
        /// Graph sizes (default 2^10..2^14).
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long = "C", default_value_t = 200.0)]
        c: f64,
        #[arg(long, default_value_t = 1)]
        base_seed: u64,
        /// Also run the reference random-walk solver on every graph.
        #[arg(long)]
        baseline: bool,
        /// Run grid cells on a worker pool.
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 40.0)]
        sample_factor: f64,
        /// Keep wall-clock times in the per-run records.
        #[arg(long)]
        timings: bool,
        /// Directory for runs.ndjson, summary.json and sizes.csv.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Sampled expansion check of the bipartite neighbourhoods.
    Expansion {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 1)]
        algo_seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Report file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(id = "density", required = true, multiple = false)]
struct Density {
    /// Edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// Coefficient for p = min(1, C ln n / n).
    #[arg(long = "C")]
    c: Option<f64>,
}

#[derive(Args)]
struct GenParams {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    density: Density,
    #[arg(long, default_value_t = 1)]
    graph_seed: u64,
}

#[derive(Args)]
struct GraphSource {
    /// Graph file; otherwise generate from --n and --p or --C.
    #[arg(long, conflicts_with_all = ["n", "p", "c", "graph_seed"])]
    graph: Option<PathBuf>,
    #[arg(long, required_unless_present = "graph")]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long, default_value_t = 1)]
    graph_seed: u64,
}

#[derive(Args)]
struct BudgetArgs {
    /// Calls allowed per vertex (default ceil(100 ln n)).
    #[arg(long)]
    per_vertex_cap: Option<u64>,
    /// Calls allowed in total (default 60 n).
    #[arg(long)]
    total_cap: Option<u64>,
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct AlgorithmFailure(String);

impl std::fmt::Display for AlgorithmFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AlgorithmFailure {}

fn resolve_p(n: usize, p: Option<f64>, c: Option<f64>) -> anyhow::Result<f64> {
    match (p, c) {
        (Some(p), None) => Ok(p),
        (None, Some(c)) => {
            let raw = c * (n as f64).ln() / n as f64;
            let p = edge_probability(n, c);
            if raw > 1.0 {
                eprintln!("warning: C ln n / n = {raw} exceeds 1 at n = {n}; using p = 1");
            }
            eprintln!("p = {p}");
            Ok(p)
        }
        _ => bail!("give exactly one of --p and --C"),
    }
}

fn load_graph(source: &GraphSource) -> anyhow::Result<StoredGraph> {
    if let Some(path) = &source.graph {
        return StoredGraph::load(path).with_context(|| format!("reading graph {}", path.display()));
    }
    let n = source.n.context("--n is required without --graph")?;
    let p = resolve_p(n, source.p, source.c)?;
    Ok(StoredGraph::generate(n, p, source.graph_seed)?)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_cycle(path: &Path) -> anyhow::Result<Vec<Vertex>> {
    let file = File::open(path).with_context(|| format!("reading cycle {}", path.display()))?;
    let mut order = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        order.push(line.parse().with_context(|| format!("{}:{}: bad vertex id {line:?}", path.display(), i + 1))?);
    }
    if order.len() > 1 && order.first() == order.last() {
        order.pop();
    }
    Ok(order)
}

fn solve(
    source: &GraphSource,
    algo_seed: u64,
    retries: u32,
    budget: &BudgetArgs,
    sample_factor: f64,
    cycle_out: Option<&Path>,
    stats_out: Option<&Path>,
) -> anyhow::Result<()> {
    let graph = load_graph(source)?;
    let n = graph.n();
    let defaults = QueryBudget::for_vertices(n);
    let budget = QueryBudget::new(
        budget.per_vertex_cap.unwrap_or(defaults.per_vertex_cap),
        budget.total_cap.unwrap_or(defaults.total_cap),
    )?;
    let config = SolverConfig { budget: Some(budget), sample_factor };

    for attempt in 0..=retries {
        let seed = if attempt == 0 { algo_seed } else { derive(algo_seed, &[attempt as u64]) };
        let (result, stats) = match find_hamilton_cycle(&graph, seed, &config) {
            Ok((cycle, stats)) => (Ok(cycle), stats),
            Err(failure) => {
                let message = format!("{failure} [{}]", failure.error.kind());
                (Err(message), failure.stats)
            }
        };
        if let Some(path) = stats_out {
            let mut w = create(path)?;
            serde_json::to_writer_pretty(&mut w, &stats)?;
            writeln!(w)?;
            w.flush()?;
        }
        match result {
            Ok(cycle) => {
                let mut w = output(cycle_out)?;
                for v in cycle.vertices().iter().chain(cycle.vertices().first()) {
                    writeln!(w, "{v}")?;
                }
                w.flush()?;
                eprintln!(
                    "solved n = {n} on attempt {} with {} oracle calls ({:.2} per vertex)",
                    attempt + 1,
                    stats.oracle_calls_total,
                    stats.oracle_calls_total as f64 / n as f64
                );
                return Ok(());
            }
            Err(message) => eprintln!("attempt {} (algo seed {seed}) failed: {message}", attempt + 1),
        }
    }
    Err(AlgorithmFailure(format!("no Hamilton cycle after {} attempt(s)", retries + 1)).into())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { params, out } => {
            let p = resolve_p(params.n, params.density.p, params.density.c)?;
            let graph = StoredGraph::generate(params.n, p, params.graph_seed)?;
            let mut w = output(out.as_deref())?;
            graph.write_to(&mut w)?;
            w.flush()?;
            eprintln!("generated n = {} with {} edges", graph.n(), graph.edge_count());
        }
        Command::Solve { source, algo_seed, retries, budget, sample_factor, cycle_out, stats_out } => solve(
            &source,
            algo_seed,
            retries,
            &budget,
            sample_factor,
            cycle_out.as_deref(),
            stats_out.as_deref(),
        )?,
        Command::Verify { graph, cycle } => {
            let g = StoredGraph::load(&graph).with_context(|| format!("reading graph {}", graph.display()))?;
            let order = read_cycle(&cycle)?;
            match verify_hamilton_cycle(&g, &order) {
                Ok(()) => println!("valid Hamilton cycle on {} vertices", g.n()),
                Err(violation) => return Err(AlgorithmFailure(format!("not a Hamilton cycle: {violation}")).into()),
            }
        }
        Command::Bench { ns, seeds, c, base_seed, baseline, parallel, sample_factor, timings, out_dir } => {
            let defaults = ScalingConfig::default();
            let config = ScalingConfig {
                ns: if ns.is_empty() { defaults.ns } else { ns },
                seeds_per_n: seeds,
                c,
                base_seed,
                baseline,
                parallel,
                sample_factor,
            };
            let report = scaling_benchmark(&config)?;
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let mut w = create(&out_dir.join("runs.ndjson"))?;
            report.write_ndjson(&mut w, timings)?;
            w.flush()?;
            let mut w = create(&out_dir.join("summary.json"))?;
            report.write_summary(&mut w)?;
            w.flush()?;
            report.write_csv(create(&out_dir.join("sizes.csv"))?)?;
            for size in &report.sizes {
                eprintln!("n = {}: {:.2} calls per vertex, {} failures", size.n, size.mean_calls_per_n, size.failures);
            }
            if let Some(fit) = &report.slope {
                eprintln!("log-log slope {:.3} [{:.3}, {:.3}]", fit.slope, fit.slope_ci_low, fit.slope_ci_high);
            }
        }
        Command::Expansion { source, algo_seed, samples, out } => {
            let graph = load_graph(&source)?;
            let report = check_expansion(&graph, algo_seed, samples)?;
            let mut w = output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w)?;
            w.flush()?;
            if !report.passed() {
                return Err(AlgorithmFailure(format!(
                    "expansion check failed: {} violations{}",
                    report.violations,
                    report.partial.as_deref().map(|e| format!(", stopped early: {e}")).unwrap_or_default()
                ))
                .into());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<AlgorithmFailure>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
