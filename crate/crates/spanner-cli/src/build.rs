//! Algorithm dispatch shared by `build` and `bench`.

use std::time::Instant;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use spanner_core::additive::{
    build_additive_0403, build_additive_37, fixed_schedule, reduction_schedule, ReductionSchedule, PRESET_SCHEDULE_EPS,
    PRESET_TARGET, RHO0,
};
use spanner_core::base::{allpairs6, multiplicative_spanner, pairwise6};
use spanner_core::graph::{EdgeSet, Graph, Vertex};
use spanner_core::math::log2n;
use spanner_core::pairwise::build_pairwise_sublinear;
use spanner_core::preservers::distance_preserver;
use spanner_core::spanner::SpannerResult;
use spanner_core::sublinear::{build_sublinear, SublinearParams};
use spanner_core::subset::build_subset_spanner;

use crate::usage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// H = G.
    Identity,
    /// Exact distance preserver for --pairs.
    Preserver,
    /// +6 pairwise spanner for --pairs.
    Pairwise6,
    /// +6 all-pairs spanner.
    Allpairs6,
    /// (2k−1)-multiplicative spanner.
    Multiplicative,
    /// Pairwise spanner with d + O(d^{1−1/k}) stretch for --pairs.
    PairwiseSublinear,
    /// All-pairs spanner with d + O(d^{1−1/k}) stretch.
    Sublinear,
    /// Subset spanner on --terminals.
    Subset,
    /// Linear-size spanner with +n^{3/7+eps} error.
    Additive37,
    /// Linear-size spanner refined along a reduction schedule.
    Additive,
}

impl Algorithm {
    pub fn needs_pairs(self) -> bool {
        matches!(self, Algorithm::Preserver | Algorithm::Pairwise6 | Algorithm::PairwiseSublinear)
    }

    pub fn needs_terminals(self) -> bool {
        self == Algorithm::Subset
    }

    pub fn name(self) -> String {
        self.to_possible_value().unwrap().get_name().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Iterate until the error exponent drops below 0.403.
    #[value(name = "0403")]
    Below0403,
}

#[derive(Args, Clone, Debug)]
pub struct BuildParams {
    /// Recursion depth for the sublinear builders (default 2) or the
    /// multiplicative stretch parameter (default ⌈log₂ n⌉).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, conflicts_with_all = ["levels", "target"])]
    pub preset: Option<Preset>,
    /// Exactly this many refinement levels.
    #[arg(long, conflicts_with = "target")]
    pub levels: Option<usize>,
    /// Refine until the error exponent drops below this.
    #[arg(long)]
    pub target: Option<f64>,
    /// Eps added at every step of the reduction schedule.
    #[arg(long, default_value_t = PRESET_SCHEDULE_EPS)]
    pub schedule_eps: f64,
}

pub struct Built {
    pub algorithm: String,
    pub params: Value,
    pub edges: EdgeSet,
    pub provenance: Value,
    pub log: Value,
    pub wall_ms: f64,
    pub warnings: Vec<String>,
}

fn pack<L: Serialize>(r: SpannerResult<L>) -> Result<(EdgeSet, Value, Value)> {
    let provenance = serde_json::to_value(r.provenance_counts())?;
    let log = serde_json::to_value(&r.log)?;
    Ok((r.edges, provenance, log))
}

fn schedule(p: &BuildParams) -> Result<ReductionSchedule> {
    Ok(match (p.preset, p.levels, p.target) {
        (Some(Preset::Below0403), _, _) => reduction_schedule(PRESET_SCHEDULE_EPS, PRESET_TARGET)?,
        (None, Some(levels), _) => fixed_schedule(RHO0, p.schedule_eps, levels)?,
        (None, None, Some(target)) => reduction_schedule(p.schedule_eps, target)?,
        (None, None, None) => return Err(usage("--alg additive needs --preset 0403, --levels or --target")),
    })
}

pub fn run_algorithm(
    g: &Graph,
    alg: Algorithm,
    p: &BuildParams,
    pairs: &[(Vertex, Vertex)],
    terminals: &[Vertex],
) -> Result<Built> {
    let n = g.n();
    let mut warnings = Vec::new();
    let sublinear = || SublinearParams::new(p.k.unwrap_or(2), p.eps, p.seed);
    let mut params = json!({ "seed": p.seed });
    let start = Instant::now();
    let (edges, provenance, log) = match alg {
        Algorithm::Identity => (g.edge_set(), json!({ "identity": g.m() }), json!({})),
        Algorithm::Preserver => {
            let r = distance_preserver(g, pairs)?;
            let log = json!({ "pairs": pairs.len(), "unreachable": r.unreachable, "edges": r.edges.len() });
            let (provenance, log, edges) = (json!({ "preserver": r.edges.len() }), log, r.edges);
            (edges, provenance, log)
        }
        Algorithm::Pairwise6 => pack(pairwise6(g, pairs, p.seed)?)?,
        Algorithm::Allpairs6 => pack(allpairs6(g, p.seed)?)?,
        Algorithm::Multiplicative => {
            let k = p.k.unwrap_or_else(|| log2n(n).ceil() as usize).max(1);
            params["k"] = json!(k);
            pack(multiplicative_spanner(g, k, p.seed)?)?
        }
        Algorithm::PairwiseSublinear => {
            let sp = sublinear()?;
            params["k"] = json!(sp.k);
            params["eps"] = json!(sp.eps);
            pack(build_pairwise_sublinear(g, pairs, &sp)?)?
        }
        Algorithm::Sublinear => {
            let sp = sublinear()?;
            params["k"] = json!(sp.k);
            params["eps"] = json!(sp.eps);
            pack(build_sublinear(g, &sp)?)?
        }
        Algorithm::Subset => {
            params["eps"] = json!(p.eps);
            pack(build_subset_spanner(g, terminals, p.eps)?)?
        }
        Algorithm::Additive37 => {
            params["eps"] = json!(p.eps);
            pack(build_additive_37(g, p.eps, p.seed)?)?
        }
        Algorithm::Additive => {
            let s = schedule(p)?;
            if let Some(w) = &s.warning {
                warnings.push(w.clone());
            }
            params["eps"] = json!(p.eps);
            params["schedule_eps"] = json!(s.eps);
            params["levels"] = json!(s.levels);
            pack(build_additive_0403(g, p.eps, &s, p.seed)?)?
        }
    };
    if alg.needs_pairs() {
        params["pairs"] = json!(pairs.len());
    }
    if alg.needs_terminals() {
        params["terminals"] = json!(terminals.len());
    }
    Ok(Built {
        algorithm: alg.name(),
        params,
        edges,
        provenance,
        log,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        warnings,
    })
}
