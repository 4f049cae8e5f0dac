//! Command-line front end: generate graphs, run fault sweeps, fold profiles
//! into tolerance curves, evaluate bounds, run batches, and plot curves.

use clap::{Parser, Subcommand};
use eftol::graph::{read_graph_file, write_graph_text, Graph};
use eftol::report::{parse_batch_config, parse_p_grid, render_curves_svg, run_batch, write_atomic};
use eftol::sim::{build_fault_profile, FaultProfile, LevelMode, SimConfig};
use eftol::tolerance::{build_curve, upper_bound, ToleranceCurve};
use eftol::{Error, GraphSpec, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "eftol",
    version,
    about = "Edge-fault and Menger-type edge-fault tolerance of regular graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Master seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trials per sampled fault level.
    #[arg(long, global = true, default_value_t = 2000)]
    trials: u64,

    /// Enumerate a fault level exactly when C(m, f) is at most this
    /// (default: the trial count).
    #[arg(long, global = true)]
    exact_threshold: Option<u64>,

    /// Probability grid start:stop:step, endpoints inclusive.
    #[arg(long, global = true, default_value = "0.1:0.9:0.1")]
    p_grid: String,

    /// Output path (file, or directory for `batch`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph from a spec string and write its text form.
    Gen {
        /// e.g. hypercube:n=4, mobius:v=1,n=4, arycube:k=4,n=2,
        /// circulant:p=16,s=1+4, random-regular:n=16,d=4,seed=7
        spec: String,
    },
    /// Run the fault-injection sweep over a graph file, writing a profile CSV.
    Profile {
        /// Graph in the text format produced by `gen`.
        graph: PathBuf,
    },
    /// Fold a profile CSV into tolerance values over the probability grid.
    Tolerance {
        /// Profile CSV produced by `profile`.
        profile: PathBuf,
        /// Fill the bound column for a d-regular graph with independence
        /// number i, written as "d,i".
        #[arg(long)]
        bound: Option<String>,
    },
    /// Evaluate the (1 - p^d)^i upper bound over the probability grid.
    Bound {
        /// Regular degree d.
        #[arg(long)]
        d: Option<usize>,
        /// Independence number i.
        #[arg(long)]
        i: Option<usize>,
        /// Derive d and i from a graph file instead (i is computed exactly).
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Run a whole batch config: per-graph profiles and curves, averaged
    /// curves, and summary tables.
    Batch {
        config: PathBuf,
        /// Override the worker count from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Render tolerance CSVs as one SVG chart.
    Plot {
        /// Tolerance CSV files; all must share one probability grid.
        curves: Vec<PathBuf>,
        /// Add a dotted polyline for the bound column where present.
        #[arg(long)]
        show_bound: bool,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Gen { spec } => cmd_gen(cli, spec),
        Cmd::Profile { graph } => cmd_profile(cli, graph),
        Cmd::Tolerance { profile, bound } => cmd_tolerance(cli, profile, bound.as_deref()),
        Cmd::Bound { d, i, graph } => cmd_bound(cli, *d, *i, graph.as_deref()),
        Cmd::Batch { config, workers } => cmd_batch(cli, config, *workers),
        Cmd::Plot { curves, show_bound } => cmd_plot(cli, curves, *show_bound),
    }
}

fn sim_config(cli: &Cli) -> SimConfig {
    let mut cfg = SimConfig::new(cli.trials, cli.seed);
    if let Some(t) = cli.exact_threshold {
        cfg.exact_threshold = t;
    }
    cfg
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<()> {
    match &cli.out {
        Some(path) => write_atomic(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn cmd_gen(cli: &Cli, spec_text: &str) -> Result<()> {
    let spec = GraphSpec::parse(spec_text)?;
    let graph = spec.materialize()?;
    let mut buf = Vec::new();
    write_graph_text(&mut buf, &graph, Some(&spec.canonical_name()))
        .map_err(|e| Error::io("<buffer>", e))?;
    emit(cli, &buf)?;
    if cli.out.is_some() {
        eprintln!(
            "{}: n={} m={} degree={}",
            spec.canonical_name(),
            graph.n(),
            graph.m(),
            graph
                .regular_degree()
                .map(|d| d.to_string())
                .unwrap_or_else(|| format!("{}..{}", graph.min_degree(), graph.max_degree()))
        );
    }
    Ok(())
}

/// Name used for seed-stream derivation and profile metadata: the spec
/// recorded in the graph file when present, else the file stem.
fn graph_name_for(path: &Path, spec: &Option<String>) -> String {
    spec.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "graph".to_string())
    })
}

fn cmd_profile(cli: &Cli, graph_path: &Path) -> Result<()> {
    let file = read_graph_file(graph_path)?;
    let name = graph_name_for(graph_path, &file.spec);
    let cfg = sim_config(cli);
    let profile = build_fault_profile(&file.graph, &name, &cfg)?;
    let mut buf = Vec::new();
    profile.write_csv(&mut buf).map_err(|e| Error::io("<buffer>", e))?;
    emit(cli, &buf)?;
    print_profile_summary(&file.graph, &profile);
    Ok(())
}

fn print_profile_summary(graph: &Graph, profile: &FaultProfile) {
    let lambda = graph.edge_connectivity();
    let count = |mode: LevelMode| profile.levels.iter().filter(|l| l.mode == mode).count();
    let span = |mode: LevelMode| -> String {
        let fs: Vec<usize> = profile
            .levels
            .iter()
            .filter(|l| l.mode == mode)
            .map(|l| l.f)
            .collect();
        match (fs.first(), fs.last()) {
            (Some(a), Some(b)) if a == b => format!("f={a}"),
            (Some(a), Some(b)) => format!("f={a}..{b}"),
            _ => "none".to_string(),
        }
    };
    eprintln!(
        "graph {}: n={} m={} lambda={lambda}",
        profile.graph_name, profile.n, profile.m
    );
    eprintln!(
        "levels: exact {} ({}), sampled {} ({}), zero {} ({})",
        count(LevelMode::Exact),
        span(LevelMode::Exact),
        count(LevelMode::Sampled),
        span(LevelMode::Sampled),
        count(LevelMode::Zero),
        span(LevelMode::Zero),
    );
}

fn parse_bound_arg(text: &str) -> Result<(usize, usize)> {
    let (d, i) = text
        .split_once(',')
        .ok_or_else(|| Error::Validation(format!("--bound expects \"d,i\", got {text:?}")))?;
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| Error::Validation(format!("--bound component {s:?} is not an integer")))
    };
    Ok((parse(d)?, parse(i)?))
}

fn cmd_tolerance(cli: &Cli, profile_path: &Path, bound: Option<&str>) -> Result<()> {
    let profile = FaultProfile::read_csv_file(profile_path)?;
    let grid = parse_p_grid(&cli.p_grid)?;
    let bound = bound.map(parse_bound_arg).transpose()?;
    let curve = build_curve(&profile, &grid, bound)?;
    let mut buf = Vec::new();
    curve.write_csv(&mut buf).map_err(|e| Error::io("<buffer>", e))?;
    emit(cli, &buf)
}

fn cmd_bound(
    cli: &Cli,
    d: Option<usize>,
    i: Option<usize>,
    graph: Option<&Path>,
) -> Result<()> {
    let (d, i) = match (d, i, graph) {
        (Some(d), Some(i), None) => (d, i),
        (None, None, Some(path)) => {
            let g = read_graph_file(path)?.graph;
            let d = g.regular_degree().ok_or_else(|| {
                Error::Validation(format!(
                    "{}: the bound applies to regular graphs only",
                    path.display()
                ))
            })?;
            (d, g.independence_number())
        }
        _ => {
            return Err(Error::Validation(
                "bound needs either --d and --i, or --graph".to_string(),
            ))
        }
    };
    if d < 1 || i < 1 {
        return Err(Error::Validation(
            "bound parameters d and i must be at least 1".to_string(),
        ));
    }
    let grid = parse_p_grid(&cli.p_grid)?;
    let mut buf = String::from("p,upper_bound\n");
    for &p in &grid {
        buf.push_str(&format!("{:.6},{:.6}\n", p, upper_bound(d, i, p)));
    }
    emit(cli, buf.as_bytes())
}

fn cmd_batch(cli: &Cli, config_path: &Path, workers: Option<usize>) -> Result<()> {
    let text = std::fs::read_to_string(config_path).map_err(|e| Error::io(config_path, e))?;
    let mut cfg = parse_batch_config(&text)?;
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let out = cli.out.clone().ok_or_else(|| {
        Error::Validation("batch needs --out <directory> for its output tree".to_string())
    })?;
    let report = run_batch(&cfg, &out)?;
    eprintln!(
        "batch complete: {} graphs, {} averages, {} files in {}",
        report.members,
        report.averages,
        report.files_written,
        out.display()
    );
    Ok(())
}

fn cmd_plot(cli: &Cli, curve_paths: &[PathBuf], show_bound: bool) -> Result<()> {
    if curve_paths.is_empty() {
        return Err(Error::Validation(
            "plot needs at least one tolerance CSV".to_string(),
        ));
    }
    let mut inputs: Vec<(String, ToleranceCurve)> = Vec::with_capacity(curve_paths.len());
    for path in curve_paths {
        let curve = ToleranceCurve::read_csv_file(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        inputs.push((label, curve));
    }
    let svg = render_curves_svg(&inputs, show_bound)?;
    emit(cli, svg.as_bytes())
}
