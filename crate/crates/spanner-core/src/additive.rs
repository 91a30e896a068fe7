//! Linear-size additive spanners: sparsification, the n^{3/7} construction and
//! its iterated refinement.
//!
//! One level clusters a (possibly sparsified) graph with base radius R,
//! keeps the BFS tree of every enlarged ball, adds a subset spanner between
//! the two bottleneck layers of every small ball, a subset spanner of the
//! whole graph on ⌈10R^{2/3} log n⌉ sampled vertices, and (above level 0) a
//! recursive lower-level spanner of every large ball.

use std::collections::HashSet;

use serde::Serialize;

use crate::base::multiplicative_spanner;
use crate::classes::{ball_trees, sample_vertices};
use crate::clustering::build_clustering;
use crate::error::{invalid, Result};
use crate::graph::{EdgeSet, Graph, Vertex};
use crate::math::{ceil_pow, ceil_snap, log2n, mix_seed};
use crate::par::*;
use crate::partition::BallDistances;
use crate::preservers::bottleneck;
use crate::spanner::{EdgeCollector, Rule, SpannerResult};
use crate::subset::build_subset_spanner;

/// Starting error exponent 3/7 + 0.1.
pub const RHO0: f64 = 3.0 / 7.0 + 0.1;
/// Running-time exponent of the level-0 construction.
pub const GAMMA: f64 = 13.0 / 7.0;
/// Schedule eps used by the 0.403 preset.
pub const PRESET_SCHEDULE_EPS: f64 = 1e-4;
pub const PRESET_TARGET: f64 = 0.403;

/// ρ ↦ (3/2 − ρ)/(4 − (19/6)ρ).
pub fn reduction_map(rho: f64) -> f64 {
    (1.5 - rho) / (4.0 - 19.0 / 6.0 * rho)
}

/// ρ ↦ (3/2)·f(ρ)/(3/2 − ρ), the small-ball size exponent.
pub fn small_ball_exponent(rho: f64) -> f64 {
    1.5 * reduction_map(rho) / (1.5 - rho)
}

/// (15 − √54)/19.
pub fn fixed_point() -> f64 {
    (15.0 - 54f64.sqrt()) / 19.0
}

/// 1 + (3/2)f(ρ)(1 − ρ)/(3/2 − ρ).
pub fn runtime_requirement(rho: f64) -> f64 {
    1.0 + 1.5 * reduction_map(rho) * (1.0 - rho) / (1.5 - rho)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReductionSchedule {
    pub eps: f64,
    pub target: Option<f64>,
    /// ρ_0, ρ_1, …, ρ_K.
    pub rho: Vec<f64>,
    pub levels: usize,
    pub gamma: f64,
    /// runtime_requirement(ρ_j) for every iterate.
    pub requirement: Vec<f64>,
    pub side_condition_holds: bool,
    pub fixed_point: f64,
    pub clamped: bool,
    pub warning: Option<String>,
}

impl ReductionSchedule {
    pub fn final_exponent(&self) -> f64 {
        *self.rho.last().unwrap()
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rho.windows(2).all(|w| w[1] < w[0])
    }
}

fn schedule_from(rho: Vec<f64>, eps: f64, target: Option<f64>, clamped: bool, warning: Option<String>) -> ReductionSchedule {
    let requirement: Vec<f64> = rho.iter().map(|&r| runtime_requirement(r)).collect();
    ReductionSchedule {
        eps,
        target,
        levels: rho.len() - 1,
        side_condition_holds: requirement.iter().all(|&x| GAMMA >= x),
        requirement,
        rho,
        gamma: GAMMA,
        fixed_point: fixed_point(),
        clamped,
        warning,
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0, 1), got {eps}"));
    }
    Ok(())
}

/// Smallest K with ρ_K ≤ target, iterating ρ_{j+1} = f(ρ_j) + eps from ρ_0.
pub fn reduction_schedule(eps: f64, target: f64) -> Result<ReductionSchedule> {
    reduction_schedule_from(RHO0, eps, target)
}

pub fn reduction_schedule_from(rho0: f64, eps: f64, target: f64) -> Result<ReductionSchedule> {
    check_eps(eps)?;
    if target <= fixed_point() {
        return invalid(format!("target {target} is not above the fixed point {}", fixed_point()));
    }
    let mut rho = vec![rho0];
    while *rho.last().unwrap() > target {
        let cur = *rho.last().unwrap();
        let next = reduction_map(cur) + eps;
        if next >= cur || rho.len() > 10_000 {
            return invalid(format!(
                "target {target} is out of reach with eps {eps}: iterates stall at {cur}"
            ));
        }
        rho.push(next);
    }
    Ok(schedule_from(rho, eps, Some(target), false, None))
}

/// Exactly `levels` iterations, stopping early with a warning once they stop
/// decreasing.
pub fn fixed_schedule(rho0: f64, eps: f64, levels: usize) -> Result<ReductionSchedule> {
    check_eps(eps)?;
    let mut rho = vec![rho0];
    let mut warning = None;
    for _ in 0..levels {
        let cur = *rho.last().unwrap();
        let next = reduction_map(cur) + eps;
        if next >= cur - 1e-12 {
            warning = Some(format!(
                "clamped to {} levels: iterates stall near {cur:.6}, above the fixed point {:.6}",
                rho.len() - 1,
                fixed_point()
            ));
            break;
        }
        rho.push(next);
    }
    let clamped = warning.is_some();
    Ok(schedule_from(rho, eps, None, clamped, warning))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SparsifyLog {
    pub d: f64,
    pub degree_cap: usize,
    pub multiplicative_k: usize,
    pub low_degree_edges: usize,
    pub multiplicative_edges: usize,
    pub edges: usize,
    /// |E(G′)| / (n·d).
    pub size_constant: f64,
}

pub struct Sparsified {
    pub graph: Graph,
    pub multiplicative: EdgeSet,
    pub log: SparsifyLog,
}

/// Edges at vertices of degree ≤ ⌈d⌉ plus a ⌈log₂ n⌉-multiplicative spanner.
pub fn sparsify(g: &Graph, d: f64, seed: u64) -> Result<Sparsified> {
    let n = g.n();
    if !(d > 1.0 && d < n as f64) {
        return invalid(format!("sparsification degree must lie in (1, {n}), got {d}"));
    }
    let cap = ceil_snap(d);
    let k = ceil_snap(log2n(n));
    let mult = multiplicative_spanner(g, k, seed)?;
    let mut low = Vec::new();
    for v in 0..n as Vertex {
        if g.degree(v) <= cap {
            low.extend(g.neighbors(v).iter().map(|&u| (v, u)));
        }
    }
    let low = EdgeSet::from_pairs(low);
    let all = low.union(&mult.edges);
    let log = SparsifyLog {
        d,
        degree_cap: cap,
        multiplicative_k: k,
        low_degree_edges: low.len(),
        multiplicative_edges: mult.edges.len(),
        edges: all.len(),
        size_constant: all.len() as f64 / (n as f64 * d),
    };
    Ok(Sparsified { graph: g.restrict_to(&all)?, multiplicative: mult.edges, log })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LevelLog {
    pub level: usize,
    pub n: usize,
    pub m: usize,
    /// Error exponent of the level below (None at level 0).
    pub rho_below: Option<f64>,
    /// Exponent a with R = ⌈n^a⌉.
    pub radius_exponent: f64,
    pub radius: usize,
    pub cluster_eps: f64,
    pub small_limit: usize,
    pub sparsified: Option<SparsifyLog>,
    pub balls: usize,
    pub small: usize,
    pub large: usize,
    pub max_boundary: usize,
    pub local_subset_edges: usize,
    pub sample_size: usize,
    pub global_subset_edges: usize,
    /// R·n^eps and n^{1+eps}/R^{4/3}.
    pub error_terms: (f64, f64),
    pub recursive: Vec<LevelLog>,
    pub edges: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AdditiveLog {
    pub eps: f64,
    pub schedule: Option<ReductionSchedule>,
    pub top: LevelLog,
    pub edges: usize,
    /// |E(H)| / n.
    pub size_constant: f64,
}

/// Linear-size spanner with +Õ(n^{3/7+eps}) error.
pub fn build_additive_37(g: &Graph, eps: f64, seed: u64) -> Result<SpannerResult<AdditiveLog>> {
    check_eps(eps)?;
    let (out, top) = build_level(g, eps, seed, &[], 0)?;
    Ok(finish(g, out, top, eps, None))
}

/// The level-K refinement along `schedule` (level 0 is [`build_additive_37`]).
pub fn build_additive_0403(
    g: &Graph,
    eps: f64,
    schedule: &ReductionSchedule,
    seed: u64,
) -> Result<SpannerResult<AdditiveLog>> {
    check_eps(eps)?;
    let (out, top) = build_level(g, eps, seed, &schedule.rho, schedule.levels)?;
    Ok(finish(g, out, top, eps, Some(schedule.clone())))
}

fn finish(g: &Graph, out: EdgeCollector, top: LevelLog, eps: f64, schedule: Option<ReductionSchedule>) -> SpannerResult<AdditiveLog> {
    let edges = out.len();
    let log = AdditiveLog { eps, schedule, top, edges, size_constant: edges as f64 / g.n().max(1) as f64 };
    SpannerResult::from_collector(out, log)
}

fn build_level(g: &Graph, eps: f64, seed: u64, rho: &[f64], level: usize) -> Result<(EdgeCollector, LevelLog)> {
    let n = g.n();
    let nf = n.max(1) as f64;
    let rho_below = (level > 0).then(|| rho[level - 1]);
    let (a, small_limit) = match rho_below {
        None => {
            let a = 3.0 / 7.0;
            (a, ceil_pow(ceil_pow(nf, a) as f64, 5.0 / 3.0))
        }
        Some(r) => (reduction_map(r), ceil_pow(nf, small_ball_exponent(r))),
    };
    let radius = ceil_pow(nf, a).max(1);
    let cluster_eps = 10.0 / (eps * log2n(n));
    let mut log = LevelLog {
        level,
        n,
        m: g.m(),
        rho_below,
        radius_exponent: a,
        radius,
        cluster_eps,
        small_limit,
        error_terms: (radius as f64 * nf.powf(eps), nf.powf(1.0 + eps) / (radius as f64).powf(4.0 / 3.0)),
        ..Default::default()
    };
    let mut out = EdgeCollector::new();
    if n <= 1 {
        return Ok((out, log));
    }

    let sparse;
    let work: &Graph = {
        let d = nf.powf(1.0 - a);
        if g.m() as f64 >= 10.0 * nf.powf(2.0 - a) && d > 1.0 && d < nf {
            let s = sparsify(g, ceil_snap(d) as f64, mix_seed(seed, level as u64, 1))?;
            log.sparsified = Some(s.log);
            sparse = s.graph;
            &sparse
        } else {
            g
        }
    };

    let cl = build_clustering(work, radius, cluster_eps)?;
    let balls = BallDistances::new(work, &cl)?;
    let small: Vec<bool> = cl.balls.iter().map(|b| b.members.len() <= small_limit).collect();
    log.balls = cl.balls.len();
    log.small = small.iter().filter(|&&s| s).count();
    log.large = log.balls - log.small;
    for tree in ball_trees(work, &balls) {
        out.extend(tree, Rule::BallTree);
    }

    enum Local {
        Small { edges: Vec<(Vertex, Vertex)>, boundary: usize },
        Large { edges: Vec<(Vertex, Vertex)>, tags: Vec<Rule>, log: LevelLog },
    }
    // Large balls with the same enlarged member set share one recursive build;
    // at small n most of them cover the whole graph.
    let mut seen = HashSet::new();
    let jobs: Vec<usize> = (0..cl.balls.len())
        .filter(|&b| {
            small[b] || level > 0 && {
                let mut key = balls.outer_members(b);
                key.sort_unstable();
                seen.insert(key)
            }
        })
        .collect();
    let locals: Vec<Local> = jobs
        .par_iter()
        .map(|&b| {
            let ball = &cl.balls[b];
            let sub = work.induced(&balls.outer_members(b));
            let sub_seed = mix_seed(seed, level as u64 + 2, b as u64);
            if small[b] {
                let r = ball.radius;
                let neck = bottleneck(work, ball.center, r, 2 * r, 4 * r)?;
                let terms: Vec<Vertex> = neck.boundary.iter().filter_map(|&v| sub.to_local(v)).collect();
                let h = build_subset_spanner(&sub.graph, &terms, eps)?;
                Ok(Local::Small { edges: sub.lift(&h.edges).iter().collect(), boundary: neck.boundary.len() })
            } else {
                let (inner, inner_log) = build_level(&sub.graph, eps, sub_seed, rho, level - 1)?;
                let (set, tags) = inner.finish();
                let edges = set.iter().map(|(u, v)| (sub.to_parent[u as usize], sub.to_parent[v as usize])).collect();
                Ok(Local::Large { edges, tags, log: inner_log })
            }
        })
        .collect::<Result<_>>()?;
    for local in locals {
        match local {
            Local::Small { edges, boundary } => {
                log.local_subset_edges += edges.len();
                log.max_boundary = log.max_boundary.max(boundary);
                out.extend(edges, Rule::BoundaryPreserver);
            }
            Local::Large { edges, tags, log: inner } => {
                for ((u, v), rule) in edges.into_iter().zip(tags) {
                    out.add(u, v, rule);
                }
                log.recursive.push(inner);
            }
        }
    }

    let size = ceil_snap(10.0 * (radius as f64).powf(2.0 / 3.0) * log2n(n));
    let sample = sample_vertices(n, size, mix_seed(seed, level as u64, 0));
    log.sample_size = sample.len();
    let global = build_subset_spanner(work, &sample, eps)?;
    log.global_subset_edges = global.edges.len();
    out.extend(global.edges.iter(), Rule::SampledSubset);
    log.edges = out.len();
    Ok((out, log))
}
