//! `bench`: one CSV row per (graph, algorithm) cell plus a slope row per
//! algorithm.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde_json::Value;
use spanner_core::classes::sample_vertices;
use spanner_core::graph::generate::{gen_graph, random_pairs};
use spanner_core::graph::Vertex;
use spanner_core::math::mix_seed;
use spanner_core::verify::{slope_fit, stretch_report, PairSelection};

use crate::build::{run_algorithm, Algorithm, BuildParams};
use crate::{create, usage, KindArgs};

#[derive(Args)]
pub struct BenchArgs {
    #[command(flatten)]
    kind: KindArgs,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Algorithms, comma separated.
    #[arg(long = "alg", value_enum, value_delimiter = ',', required = true)]
    algs: Vec<Algorithm>,
    #[command(flatten)]
    params: BuildParams,
    /// Seeds per cell, counting up from --seed.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Random demand pairs for the pairwise algorithms.
    #[arg(long, default_value_t = 64)]
    pair_count: usize,
    /// Random terminals for the subset spanner.
    #[arg(long, default_value_t = 16)]
    terminal_count: usize,
    /// Random pairs measured for the all-pairs algorithms (0 skips measuring).
    #[arg(long, default_value_t = 1000)]
    measure: usize,
    /// CSV output (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

pub const HEADER: &str = "row,kind,n,m,algorithm,params,seed,edges,max_error,infinite,wall_ms,edge_slope,time_slope";

fn params_field(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .filter(|(k, _)| k.as_str() != "seed")
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";"),
        _ => String::new(),
    }
}

fn fmt_slope(points: &[(f64, f64)]) -> String {
    slope_fit(points).map(|f| format!("{:.4}", f.slope)).unwrap_or_default()
}

pub fn cmd_bench(a: BenchArgs) -> Result<u8> {
    if a.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    let mut ns = a.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let kind_name = format!("{:?}", a.kind.kind).to_lowercase();
    let mut out = create(a.output.as_deref())?;
    writeln!(out, "{HEADER}")?;
    // algorithm → n → (edges, wall_ms) per seed, and the params column.
    let mut cells: BTreeMap<usize, (String, BTreeMap<usize, Vec<(f64, f64)>>)> = BTreeMap::new();
    for &n in &ns {
        for s in 0..a.seeds {
            let seed = a.params.seed + s;
            let g = gen_graph(&a.kind.kind(Some(n))?, seed)?;
            let pairs = random_pairs(g.n(), a.pair_count, mix_seed(seed, 1, n as u64));
            let terminals = sample_vertices(g.n(), a.terminal_count, mix_seed(seed, 2, n as u64));
            for (i, &alg) in a.algs.iter().enumerate() {
                let params = BuildParams { seed, ..a.params.clone() };
                let built = run_algorithm(&g, alg, &params, &pairs, &terminals)?;
                let selection = if alg.needs_pairs() {
                    Some(PairSelection::Pairs { pairs: pairs.clone() })
                } else if alg.needs_terminals() {
                    let tp: Vec<(Vertex, Vertex)> = terminals
                        .iter()
                        .enumerate()
                        .flat_map(|(j, &u)| terminals[j + 1..].iter().map(move |&v| (u, v)))
                        .collect();
                    Some(PairSelection::Pairs { pairs: tp })
                } else if a.measure > 0 {
                    Some(PairSelection::Sample { count: a.measure, seed: mix_seed(seed, 3, n as u64) })
                } else {
                    None
                };
                let (max_error, infinite) = match selection {
                    Some(sel) => {
                        let r = stretch_report(&g, &built.edges, &sel)?;
                        (r.max_error.to_string(), r.infinite.to_string())
                    }
                    None => (String::new(), String::new()),
                };
                let pf = params_field(&built.params);
                writeln!(
                    out,
                    "data,{kind_name},{},{},{},{pf},{seed},{},{max_error},{infinite},{:.3},,",
                    g.n(),
                    g.m(),
                    built.algorithm,
                    built.edges.len(),
                    built.wall_ms
                )?;
                out.flush()?;
                let cell = cells.entry(i).or_insert_with(|| (pf, BTreeMap::new()));
                cell.1.entry(g.n()).or_default().push((built.edges.len() as f64, built.wall_ms));
            }
        }
    }
    for (i, (pf, by_n)) in cells {
        let mean = |pick: fn(&(f64, f64)) -> f64| -> Vec<(f64, f64)> {
            by_n.iter()
                .map(|(&n, runs)| (n as f64, runs.iter().map(pick).sum::<f64>() / runs.len() as f64))
                .collect()
        };
        let edge_slope = fmt_slope(&mean(|r| r.0));
        let time_slope = fmt_slope(&mean(|r| r.1));
        writeln!(out, "summary,{kind_name},,,{},{pf},,,,,,{edge_slope},{time_slope}", a.algs[i].name())?;
    }
    out.flush()?;
    Ok(0)
}
