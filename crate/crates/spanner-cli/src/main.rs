//! `spanners`: generate graphs, build spanners, verify and benchmark them.
//!
//! Exit codes: 0 ok, 2 usage or input error, 3 probabilistic failure (a
//! hitting set kept missing a ball), 4 verification failure, 1 anything else.

mod bench;
mod build;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use spanner_core::error::SpannerError;
use spanner_core::graph::generate::{gen_graph, GraphKind};
use spanner_core::graph::io::{read_edge_list, read_pairs, read_terminals, write_graph, LabelMap, LoadedGraph};
use spanner_core::graph::EdgeSet;
use spanner_core::verify::{check_bound, stretch_report, PairSelection, ALL_PAIRS_LIMIT};

use build::{Algorithm, BuildParams};

#[derive(Parser)]
#[command(name = "spanners", version, about = "Additive and sublinear graph spanners")]
struct Cli {
    /// Worker threads for the parallel paths (0 = one per core).
    #[arg(long, global = true, env = "SPANNERS_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic graph as an edge list.
    Gen(GenArgs),
    /// Build a spanner of an edge-list graph.
    Build(BuildArgs),
    /// Measure a spanner's distance error against its host graph.
    Verify(VerifyArgs),
    /// Build and measure algorithms over a grid of generated graphs.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Path,
    Cycle,
    Grid,
    Gnm,
    Geometric,
    Tree,
    Ring,
    Star,
    Complete,
}

#[derive(Args, Clone, Debug)]
pub struct KindArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Edges for gnm.
    #[arg(long)]
    m: Option<usize>,
    /// Edges per vertex for gnm when --m is not given.
    #[arg(long, default_value_t = 4.0)]
    edges_per_vertex: f64,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Expected degree for geometric graphs.
    #[arg(long, default_value_t = 8.0)]
    degree: f64,
    /// Neighbors on each side for ring graphs.
    #[arg(long = "ring-k", default_value_t = 2)]
    ring_k: usize,
}

impl KindArgs {
    /// The generator for `n` vertices.
    pub fn kind(&self, n: Option<usize>) -> Result<GraphKind> {
        let need_n = || n.ok_or_else(|| usage(format!("--n is required for {:?}", self.kind)));
        Ok(match self.kind {
            Kind::Path => GraphKind::Path { n: need_n()? },
            Kind::Cycle => GraphKind::Cycle { n: need_n()? },
            Kind::Grid => match (self.rows, self.cols, n) {
                (Some(rows), Some(cols), _) => GraphKind::Grid { rows, cols },
                (_, _, Some(n)) => {
                    let rows = (n as f64).sqrt().floor().max(1.0) as usize;
                    GraphKind::Grid { rows, cols: n / rows }
                }
                _ => return Err(usage("grid needs --rows and --cols, or --n")),
            },
            Kind::Gnm => {
                let n = need_n()?;
                GraphKind::Gnm { n, m: self.m.unwrap_or((self.edges_per_vertex * n as f64).round() as usize) }
            }
            Kind::Geometric => GraphKind::Geometric { n: need_n()?, avg_degree: self.degree },
            Kind::Tree => GraphKind::Tree { n: need_n()? },
            Kind::Ring => GraphKind::Ring { n: need_n()?, k: self.ring_k },
            Kind::Star => GraphKind::Star { n: need_n()? },
            Kind::Complete => GraphKind::Complete { n: need_n()? },
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    kind: KindArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// Input edge list.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    alg: Algorithm,
    #[command(flatten)]
    params: BuildParams,
    /// Demand pairs, one `u v` per line.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Terminal vertices, one per line.
    #[arg(long)]
    terminals: Option<PathBuf>,
    /// Spanner edge list (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// JSON build log.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    spanner: PathBuf,
    /// Measure only these pairs (one `u v` per line).
    #[arg(long, conflicts_with = "sample")]
    pairs: Option<PathBuf>,
    /// Measure this many random pairs instead of all pairs.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail when the maximum additive error exceeds this.
    #[arg(long)]
    max_error: Option<u32>,
    /// JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Per-pair CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Bad flags or input; exits with 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<SpannerError>() {
            return match e {
                SpannerError::HittingSetExhausted { .. } => 3,
                SpannerError::NotSubgraph(..) => 4,
                SpannerError::Invariant(_) | SpannerError::NotAPath(_) | SpannerError::Uncovered(_) => 1,
                _ => 2,
            };
        }
        if cause.is::<io::Error>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => bench::cmd_bench(a),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) -> Result<()> {
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("starting the worker pool")?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: usize) -> Result<()> {
    if threads > 1 {
        eprintln!("warning: built without the parallel feature, --threads {threads} ignored");
    }
    Ok(())
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

pub fn create(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn load_graph(path: &Path) -> Result<LoadedGraph> {
    read_edge_list(open(path)?).with_context(|| format!("reading {}", path.display()))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut out = create(Some(path))?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<u8> {
    let kind = a.kind.kind(a.n)?;
    let g = gen_graph(&kind, a.seed)?;
    let mut out = create(a.output.as_deref())?;
    write_graph(&mut out, &g, &LabelMap::identity(g.n()))?;
    out.flush()?;
    eprintln!("n={} m={}", g.n(), g.m());
    Ok(0)
}

fn cmd_build(a: BuildArgs) -> Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let alg = a.alg;
    let pairs = match &a.pairs {
        Some(p) => read_pairs(open(p)?, &loaded.labels).with_context(|| format!("reading {}", p.display()))?,
        None if alg.needs_pairs() => return Err(usage(format!("--alg {} needs --pairs", alg.name()))),
        None => Vec::new(),
    };
    let terminals = match &a.terminals {
        Some(p) => read_terminals(open(p)?, &loaded.labels).with_context(|| format!("reading {}", p.display()))?,
        None if alg.needs_terminals() => return Err(usage(format!("--alg {} needs --terminals", alg.name()))),
        None => Vec::new(),
    };
    let built = build::run_algorithm(&loaded.graph, alg, &a.params, &pairs, &terminals)?;
    let mut out = create(a.output.as_deref())?;
    spanner_core::graph::io::write_edges(&mut out, &built.edges, &loaded.labels)?;
    out.flush()?;
    if let Some(path) = &a.log {
        let log = json!({
            "schema": 1,
            "command": "build",
            "graph": { "path": a.graph, "n": loaded.graph.n(), "m": loaded.graph.m(), "duplicates": loaded.duplicates },
            "algorithm": built.algorithm,
            "params": built.params,
            "edges": built.edges.len(),
            "wall_ms": built.wall_ms,
            "provenance": built.provenance,
            "warnings": built.warnings,
            "log": built.log,
        });
        write_json(path, &log)?;
    }
    for w in &built.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("n={} m={} edges={}", loaded.graph.n(), loaded.graph.m(), built.edges.len());
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let loaded = load_graph(&a.graph)?;
    let g = &loaded.graph;
    let h_pairs = read_pairs(open(&a.spanner)?, &loaded.labels)
        .with_context(|| format!("reading {}", a.spanner.display()))?;
    let h = EdgeSet::from_pairs(h_pairs);
    let selection = if let Some(p) = &a.pairs {
        PairSelection::Pairs { pairs: read_pairs(open(p)?, &loaded.labels)? }
    } else if let Some(count) = a.sample {
        PairSelection::Sample { count, seed: a.seed }
    } else if g.n() <= ALL_PAIRS_LIMIT {
        PairSelection::All
    } else {
        eprintln!("n > {ALL_PAIRS_LIMIT}: measuring 10000 random pairs");
        PairSelection::Sample { count: 10_000, seed: a.seed }
    };
    let report = stretch_report(g, &h, &selection)?;
    let mut checks = vec![
        check_bound("infinite_errors", report.infinite as f64, 0.0),
        check_bound("shortcuts", report.shortcuts as f64, 0.0),
        check_bound("cross_check_mismatches", report.cross_check_mismatches as f64, 0.0),
    ];
    if let Some(b) = a.max_error {
        checks.push(check_bound("max_error", report.max_error as f64, b as f64));
    }
    let passed = checks.iter().all(|c| c.passed);
    if let Some(path) = &a.csv {
        let mut out = create(Some(path))?;
        report.write_csv(&mut out)?;
        out.flush()?;
    }
    if let Some(path) = &a.report {
        write_json(path, &json!({ "schema": 1, "command": "verify", "passed": passed, "checks": checks, "report": report }))?;
    }
    println!(
        "pairs={} max_error={} mean_error={:.4} infinite={} passed={}",
        report.pairs, report.max_error, report.mean_error, report.infinite, passed
    );
    Ok(if passed { 0 } else { 4 })
}
