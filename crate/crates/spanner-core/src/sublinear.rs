//! All-pairs sublinear additive spanners.
//!
//! For every distance class the graph is clustered with base radius
//! ⌈D^{1−1/k}⌉. Small balls (|B(c,r)| ≤ L_k) get a recursive all-pairs (k−1)
//! spanner of G[B(c,4r)]; large balls get a (k−1) pairwise spanner over the
//! demand pairs gathered from sampled paths. Every ball also keeps its BFS
//! tree. k = 1 is the +6 all-pairs spanner.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::base::{allpairs6, BaseLog};
use crate::classes::{ball_instance, ball_trees, distance_classes, hitting_pass, sample_hitting_set, HittingClass, PassStats};
use crate::clustering::{build_clustering, Clustering};
use crate::error::Result;
use crate::graph::bfs::{distances_from, DynamicGraph};
use crate::graph::{Graph, Vertex, UNREACHABLE};
use crate::math::{ceil_pow, ceil_snap, log2n, mix_seed};
use crate::pairwise::build_pairwise_sublinear;
use crate::par::*;
use crate::partition::BallDistances;
use crate::spanner::{EdgeCollector, Rule, SpannerResult};

pub use crate::classes::SublinearParams;

/// L_k = ⌈n^{(2^k−1)/(2^{k+1}−1)}⌉.
pub fn large_ball_threshold(n: usize, k: usize) -> usize {
    let a = (1u64 << k.min(60)) as f64;
    ceil_pow(n as f64, (a - 1.0) / (2.0 * a - 1.0))
}

/// Replay check that every settled vertex is close to its ball's center in H_D.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SettledAudit {
    pub checked: usize,
    /// 50 · 2^{(30k−10)/eps} · R.
    pub bound: f64,
    /// max over settled (c, s) of dist_H(s,c) − dist_G(s,c); None if never finite.
    pub max_excess: Option<u32>,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SublinearClassLog {
    pub distance: usize,
    pub radius: usize,
    pub balls: usize,
    pub small: usize,
    pub large: usize,
    pub pass: PassStats,
    pub max_demand: usize,
    pub demand_histogram: BTreeMap<usize, usize>,
    pub small_builds: usize,
    pub large_builds: usize,
    /// Largest |B(c,4r)| handed to a recursive build.
    pub max_sub_size: usize,
    pub sum_sub_sizes: usize,
    pub settled: SettledAudit,
    pub edges: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SublinearLog {
    pub k: usize,
    pub eps: f64,
    pub n: usize,
    pub threshold: usize,
    pub sample_size: usize,
    pub sample_attempts: usize,
    /// True when no class has a large ball and the sampled-path pass was skipped.
    pub pass_skipped: bool,
    pub recursion_depth: usize,
    pub classes: Vec<SublinearClassLog>,
    pub base: Option<BaseLog>,
    pub edges: usize,
}

pub fn build_sublinear(g: &Graph, params: &SublinearParams) -> Result<SpannerResult<SublinearLog>> {
    params.validate()?;
    let n = g.n();
    let mut log = SublinearLog { k: params.k, eps: params.eps, n, ..Default::default() };
    if params.k == 1 {
        let base = allpairs6(g, params.seed)?;
        log.edges = base.edges.len();
        return Ok(base.map_log(|b| {
            log.base = Some(b);
            log
        }));
    }
    let threshold = large_ball_threshold(n, params.k);
    log.threshold = threshold;
    let classes = distance_classes(n);
    let clusterings: Vec<Clustering> = classes
        .par_iter()
        .map(|&d| build_clustering(g, params.class_radius(d), params.eps))
        .collect::<Result<_>>()?;
    let tables: Vec<BallDistances> = clusterings.iter().map(|cl| BallDistances::new(g, cl)).collect::<Result<_>>()?;
    let large: Vec<Vec<bool>> =
        clusterings.iter().map(|cl| cl.balls.iter().map(|b| b.members.len() > threshold).collect()).collect();

    let mut passes: Vec<HittingClass> = classes
        .iter()
        .zip(&tables)
        .zip(&large)
        .map(|((&d, t), l)| HittingClass::new(t, params.path_window(d), l.clone()))
        .collect();
    if large.iter().flatten().any(|&l| l) {
        let size = ceil_snap(10.0 * n as f64 / threshold as f64 * log2n(n));
        let must_hit: Vec<Vec<&[Vertex]>> = clusterings
            .iter()
            .zip(&large)
            .map(|(cl, l)| cl.balls.iter().zip(l).filter(|(_, &x)| x).map(|(b, _)| &b.members[..]).collect())
            .collect();
        let sample = sample_hitting_set(n, size, params.seed, &must_hit)?;
        log.sample_size = sample.vertices.len();
        log.sample_attempts = sample.attempts;
        hitting_pass(g, &sample.vertices, &mut passes)?;
    } else {
        log.pass_skipped = true;
    }

    let work: Vec<(usize, HittingClass)> = passes.into_iter().enumerate().collect();
    let finished: Vec<(EdgeCollector, SublinearClassLog, usize)> = work
        .into_par_iter()
        .map(|(i, pass)| finish_class(g, classes[i], pass, params))
        .collect::<Result<_>>()?;
    let mut out = EdgeCollector::new();
    for (edges, class_log, depth) in finished {
        let (set, tags) = edges.finish();
        out.absorb(&set, &tags, |v| v);
        log.recursion_depth = log.recursion_depth.max(depth + 1);
        log.classes.push(class_log);
    }
    log.edges = out.len();
    Ok(SpannerResult::from_collector(out, log))
}

fn finish_class(
    g: &Graph,
    distance: usize,
    pass: HittingClass,
    params: &SublinearParams,
) -> Result<(EdgeCollector, SublinearClassLog, usize)> {
    let balls = pass.balls;
    let cl = balls.clustering();
    let demand = pass.demand;
    let large = pass.eligible;
    let mut log = SublinearClassLog {
        distance,
        radius: cl.base_radius,
        balls: cl.balls.len(),
        large: large.iter().filter(|&&l| l).count(),
        max_demand: demand.max_pairs(),
        demand_histogram: demand.histogram(),
        pass: pass.stats,
        ..Default::default()
    };
    log.small = log.balls - log.large;

    let mut out = EdgeCollector::new();
    let mut adj = DynamicGraph::new(g.n());
    for tree in ball_trees(g, balls) {
        for (u, v) in tree {
            adj.add_edge(u, v);
            out.add(u, v, Rule::BallTree);
        }
    }
    let jobs: Vec<usize> =
        (0..cl.balls.len()).filter(|&b| !large[b] || !demand.pairs[b].is_empty()).collect();
    let built: Vec<(Vec<(Vertex, Vertex)>, usize, usize)> = jobs
        .par_iter()
        .map(|&b| {
            let (sub, local) = ball_instance(g, balls, b, &demand.pairs[b])?;
            let seed = mix_seed(params.seed, distance as u64, b as u64);
            let lower = params.lower(seed);
            let (edges, depth) = if large[b] {
                let r = build_pairwise_sublinear(&sub.graph, &local, &lower)?;
                (sub.lift(&r.edges), r.log.recursion_depth)
            } else {
                let r = build_sublinear(&sub.graph, &lower)?;
                (sub.lift(&r.edges), r.log.recursion_depth)
            };
            Ok((edges.iter().collect(), depth, sub.graph.n()))
        })
        .collect::<Result<_>>()?;
    let mut depth = 0;
    for (&b, (edges, d, size)) in jobs.iter().zip(built) {
        if large[b] {
            log.large_builds += 1;
        } else {
            log.small_builds += 1;
        }
        log.max_sub_size = log.max_sub_size.max(size);
        log.sum_sub_sizes += size;
        depth = depth.max(d);
        for (u, v) in edges {
            adj.add_edge(u, v);
            out.add(u, v, Rule::BallRecursion);
        }
    }

    let k = params.k as f64;
    log.settled.bound = 50.0 * ((30.0 * k - 10.0) / params.eps).exp2() * cl.base_radius as f64;
    for (b, settled) in demand.settled.iter().enumerate() {
        if settled.is_empty() {
            continue;
        }
        let c = cl.balls[b].center;
        let dg = distances_from(g, c);
        let dh = distances_from(&adj, c);
        for &s in settled {
            log.settled.checked += 1;
            let (x, y) = (dg[s as usize], dh[s as usize]);
            if x == UNREACHABLE {
                continue;
            }
            if y == UNREACHABLE || (y - x) as f64 > log.settled.bound {
                log.settled.violations += 1;
            }
            if y != UNREACHABLE {
                log.settled.max_excess = Some(log.settled.max_excess.unwrap_or(0).max(y - x));
            }
        }
    }
    log.edges = out.len();
    Ok((out, log, depth))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        // k = 2: n^{3/7}; k = 1: n^{1/3}.
        assert_eq!(large_ball_threshold(128, 2), 8);
        assert_eq!(large_ball_threshold(1000, 1), 10);
        assert_eq!(large_ball_threshold(1, 3), 1);
    }
}
