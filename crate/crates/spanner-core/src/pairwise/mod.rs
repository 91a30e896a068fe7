//! Pairwise sublinear additive spanners.
//!
//! Demand pairs are grouped by distance class D ∈ {1, 2, 4, …}. For each class
//! the graph is clustered with base radius ⌈D^{1−1/k}⌉ and H_D collects a BFS
//! tree of every enlarged ball B(c,4r) plus a recursive (k−1) pairwise spanner
//! of G[B(c,4r)] over the ball's demand set. Demand sets are filled by a pass
//! over sampled paths (for paths crossing large balls) and by an interval tree
//! over every demand path of the class.

mod interval_tree;
mod ledger;

use std::collections::BTreeMap;

use serde::Serialize;

pub use self::interval_tree::{run_interval_tree, IntervalTreeReport};
pub use self::ledger::{TightnessLedger, TightnessMode};
pub use crate::classes::SublinearParams;

use crate::base::{pairwise6, BaseLog};
use crate::classes::{
    ball_instance, ball_trees, class_of, hitting_pass, sample_hitting_set, BallDemand, HittingClass,
    PassStats,
};
use crate::clustering::{build_clustering, Clustering};
use crate::error::Result;
use crate::graph::bfs::DynamicGraph;
use crate::graph::{normalize_pairs, Graph, Vertex, UNREACHABLE};
use crate::math::{ceil_pow, ceil_snap, log2n, mix_seed};
use crate::par::*;
use crate::partition::{partition_unchecked, BallDistances};
use crate::preservers::for_each_source_tree;
use crate::spanner::{EdgeCollector, Rule, SpannerResult};

pub const TIGHTNESS_BASIS: &str = "ball trees and every ball sub-spanner built so far in the class";

#[derive(Clone, Debug, Default, Serialize)]
pub struct Step2Stats {
    pub pairs: usize,
    pub case1: usize,
    pub case2: usize,
    pub max_tree_depth: usize,
    pub tree_nodes: usize,
    pub activations: Vec<usize>,
    pub pairs_added: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PairwiseClassLog {
    pub distance: usize,
    pub radius: usize,
    pub demand_pairs: usize,
    pub balls: usize,
    pub balls_per_level: Vec<usize>,
    pub step1: PassStats,
    /// max_c |𝓟_c| right after the sampled-path pass.
    pub step1_max_demand: usize,
    pub step2: Step2Stats,
    /// |𝓟_c| → number of balls, at the end.
    pub demand_histogram: BTreeMap<usize, usize>,
    /// Σ|𝓟_c| over the balls of each level, at the end.
    pub level_demand: Vec<usize>,
    /// level_demand[i] / (2^{⌈1/eps⌉}/eps² · n^{(i+1)eps} · |P| · log₂ n).
    pub level_demand_ratio: Vec<f64>,
    pub tightness_mode: Option<TightnessMode>,
    /// Φ_L after initialization and after every refresh.
    pub potentials: Vec<Vec<usize>>,
    pub potentials_monotone: bool,
    pub sub_builds: usize,
    pub max_sub_depth: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PairwiseLog {
    pub k: usize,
    pub eps: f64,
    pub n: usize,
    pub pairs: usize,
    pub unreachable: Vec<(Vertex, Vertex)>,
    pub sample_size: usize,
    pub sample_attempts: usize,
    /// Levels of recursion above the +6 base case.
    pub recursion_depth: usize,
    pub tightness_basis: String,
    pub classes: Vec<PairwiseClassLog>,
    pub base: Option<BaseLog>,
    pub edges: usize,
}

/// Level of a ball of size `size`: 0 above n/√|P|, otherwise the i ≥ 1 with
/// n^{1−iε}/√|P| < size ≤ n^{1−(i−1)ε}/√|P|.
pub fn ball_level(size: usize, n: usize, pairs: usize, eps: f64, max_level: usize) -> usize {
    let base = n as f64 / (pairs.max(1) as f64).sqrt();
    let size = size as f64;
    if size > base {
        return 0;
    }
    (1..=max_level).find(|&i| size > base * (n as f64).powf(-(i as f64) * eps)).unwrap_or(max_level)
}

/// β(L) = ⌈n^{(L+1)ε}⌉ for L = 0..=max_level.
pub fn beta_values(n: usize, eps: f64, max_level: usize) -> Vec<usize> {
    (0..=max_level).map(|l| ceil_pow(n as f64, (l + 1) as f64 * eps)).collect()
}

struct ClassInput {
    distance: usize,
    pairs: Vec<(Vertex, Vertex)>,
}

pub fn build_pairwise_sublinear(
    g: &Graph,
    pairs: &[(Vertex, Vertex)],
    params: &SublinearParams,
) -> Result<SpannerResult<PairwiseLog>> {
    params.validate()?;
    for &(u, v) in pairs {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
    }
    let pairs: Vec<(Vertex, Vertex)> = normalize_pairs(pairs).into_iter().filter(|(u, v)| u != v).collect();
    let n = g.n();
    let mut log = PairwiseLog {
        k: params.k,
        eps: params.eps,
        n,
        pairs: pairs.len(),
        tightness_basis: TIGHTNESS_BASIS.to_string(),
        ..Default::default()
    };
    if params.k == 1 {
        let base = pairwise6(g, &pairs, params.seed)?;
        log.unreachable = base.log.unreachable.clone();
        log.edges = base.edges.len();
        return Ok(base.map_log(|b| {
            log.base = Some(b);
            log
        }));
    }

    let mut by_source: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(u, v) in &pairs {
        by_source.entry(u).or_default().push(v);
    }
    let sources: Vec<Vertex> = by_source.keys().copied().collect();
    let mut classes: BTreeMap<usize, Vec<(Vertex, Vertex)>> = BTreeMap::new();
    for_each_source_tree(g, &sources, |s, tree| {
        for &t in &by_source[&s] {
            match tree.dist[t as usize] {
                UNREACHABLE => log.unreachable.push((s, t)),
                d => classes.entry(class_of(d)).or_default().push((s, t)),
            }
        }
    });
    let inputs: Vec<ClassInput> = classes.into_iter().map(|(distance, pairs)| ClassInput { distance, pairs }).collect();

    let max_level = params.level_count();
    let clusterings: Vec<Clustering> = inputs
        .par_iter()
        .map(|c| build_clustering(g, params.class_radius(c.distance), params.eps))
        .collect::<Result<_>>()?;
    let tables: Vec<BallDistances> = clusterings.iter().map(|cl| BallDistances::new(g, cl)).collect::<Result<_>>()?;
    let levels: Vec<Vec<usize>> = clusterings
        .iter()
        .map(|cl| {
            cl.balls.iter().map(|b| ball_level(b.members.len(), n, pairs.len(), params.eps, max_level)).collect()
        })
        .collect();

    let size = ceil_snap(10.0 * (pairs.len() as f64).sqrt() * log2n(n));
    let must_hit: Vec<Vec<&[Vertex]>> = clusterings
        .iter()
        .zip(&levels)
        .map(|(cl, lv)| cl.balls.iter().zip(lv).filter(|(_, &l)| l == 0).map(|(b, _)| &b.members[..]).collect())
        .collect();
    let sample = sample_hitting_set(n, size, params.seed, &must_hit)?;
    log.sample_size = sample.vertices.len();
    log.sample_attempts = sample.attempts;

    let mut passes: Vec<HittingClass> = inputs
        .iter()
        .zip(&tables)
        .map(|(c, t)| HittingClass::new(t, params.path_window(c.distance), vec![true; t.clustering().balls.len()]))
        .collect();
    hitting_pass(g, &sample.vertices, &mut passes)?;

    let work: Vec<(usize, HittingClass)> = passes.into_iter().enumerate().collect();
    let finished: Vec<(EdgeCollector, PairwiseClassLog)> = work
        .into_par_iter()
        .map(|(i, pass)| finish_class(g, &inputs[i], pass, &levels[i], params, pairs.len()))
        .collect::<Result<_>>()?;

    let mut out = EdgeCollector::new();
    for (edges, class_log) in finished {
        let (set, tags) = edges.finish();
        out.absorb(&set, &tags, |v| v);
        log.recursion_depth = log.recursion_depth.max(1 + class_log.max_sub_depth);
        log.classes.push(class_log);
    }
    log.edges = out.len();
    Ok(SpannerResult::from_collector(out, log))
}

/// H_D under construction: its edges with provenance and adjacency.
struct ClassSpanner {
    edges: EdgeCollector,
    adj: DynamicGraph,
}

impl ClassSpanner {
    fn add(&mut self, u: Vertex, v: Vertex, rule: Rule) {
        self.adj.add_edge(u, v);
        self.edges.add(u, v, rule);
    }
}

/// Rebuilds the (k−1) sub-spanner of each listed ball from its full demand set.
fn rebuild_balls(
    g: &Graph,
    balls: &BallDistances,
    demand: &BallDemand,
    which: &[usize],
    params: &SublinearParams,
    distance: usize,
    round: usize,
) -> Result<Vec<(Vec<(Vertex, Vertex)>, usize)>> {
    which
        .par_iter()
        .map(|&b| {
            let (sub, local) = ball_instance(g, balls, b, &demand.pairs[b])?;
            let seed = mix_seed(params.seed, distance as u64, (b as u64) << 20 | round as u64);
            let r = build_pairwise_sublinear(&sub.graph, &local, &params.lower(seed))?;
            let lifted = sub.lift(&r.edges);
            Ok((lifted.iter().collect(), r.log.recursion_depth))
        })
        .collect()
}

fn finish_class(
    g: &Graph,
    input: &ClassInput,
    pass: HittingClass,
    levels: &[usize],
    params: &SublinearParams,
    total_pairs: usize,
) -> Result<(EdgeCollector, PairwiseClassLog)> {
    let n = g.n();
    let balls = pass.balls;
    let cl = balls.clustering();
    let max_level = params.level_count();
    let mut demand = pass.demand;
    let mut log = PairwiseClassLog {
        distance: input.distance,
        radius: cl.base_radius,
        demand_pairs: input.pairs.len(),
        balls: cl.balls.len(),
        balls_per_level: vec![0; max_level + 1],
        step1_max_demand: demand.max_pairs(),
        step1: pass.stats,
        step2: Step2Stats { activations: vec![0; max_level + 1], ..Default::default() },
        potentials_monotone: true,
        ..Default::default()
    };
    for &l in levels {
        log.balls_per_level[l] += 1;
    }

    let mut h = ClassSpanner { edges: EdgeCollector::new(), adj: DynamicGraph::new(n) };
    for tree in ball_trees(g, balls) {
        for (u, v) in tree {
            h.add(u, v, Rule::BallTree);
        }
    }
    let mut round = 0;
    let mut built = vec![0usize; cl.balls.len()];
    let mut refresh = |h: &mut ClassSpanner, demand: &BallDemand, log: &mut PairwiseClassLog| -> Result<()> {
        let stale: Vec<usize> = (0..built.len()).filter(|&b| demand.pairs[b].len() > built[b]).collect();
        round += 1;
        for (&b, (edges, depth)) in stale.iter().zip(rebuild_balls(g, balls, demand, &stale, params, input.distance, round)?) {
            built[b] = demand.pairs[b].len();
            log.sub_builds += 1;
            log.max_sub_depth = log.max_sub_depth.max(depth);
            for (u, v) in edges {
                h.add(u, v, Rule::BallRecursion);
            }
        }
        Ok(())
    };
    refresh(&mut h, &demand, &mut log)?;

    let centers: Vec<Vertex> = cl.balls.iter().map(|b| b.center).collect();
    let mut ledger =
        TightnessLedger::new(g, &h.adj, centers, levels.to_vec(), max_level, params.tight_slack(input.distance));
    log.tightness_mode = Some(ledger.mode());
    log.potentials.push(ledger.potentials().to_vec());
    let beta = beta_values(n, params.eps, max_level);

    let mut targets: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(s, t) in &input.pairs {
        targets.entry(s).or_default().push(t);
    }
    let sources: Vec<Vertex> = targets.keys().copied().collect();
    let mut failure = None;
    for_each_source_tree(g, &sources, |s, tree| {
        if failure.is_some() {
            return;
        }
        for &t in &targets[&s] {
            let step = (|| -> Result<()> {
                let path = tree.path_to(t).unwrap();
                let part = partition_unchecked(&path, balls);
                let seg_levels: Vec<usize> = part.segments.iter().map(|seg| levels[seg.ball]).collect();
                let mut chosen = Vec::new();
                let report = run_interval_tree(
                    &seg_levels,
                    max_level,
                    &beta,
                    |i, j| ledger.is_tight(part.segments[i].ball, part.segments[j].ball),
                    |i| chosen.push(i),
                )?;
                for i in chosen {
                    if demand.insert_checked(balls, &path, &part.segments[i])? {
                        log.step2.pairs_added += 1;
                    }
                }
                let st = &mut log.step2;
                st.pairs += 1;
                st.case1 += report.case1;
                st.case2 += report.case2;
                st.tree_nodes += report.nodes;
                st.max_tree_depth = st.max_tree_depth.max(report.depth);
                for (a, b) in st.activations.iter_mut().zip(&report.activations) {
                    *a += b;
                }
                refresh(&mut h, &demand, &mut log)?;
                ledger.refresh(&h.adj);
                let now = ledger.potentials().to_vec();
                let prev = log.potentials.last().unwrap();
                if now.iter().zip(prev).any(|(a, b)| a > b) {
                    log.potentials_monotone = false;
                }
                log.potentials.push(now);
                Ok(())
            })();
            if let Err(e) = step {
                failure = Some(e);
                return;
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    log.demand_histogram = demand.histogram();
    log.level_demand = vec![0; max_level + 1];
    for (b, p) in demand.pairs.iter().enumerate() {
        log.level_demand[levels[b]] += p.len();
    }
    let scale = (max_level as f64).exp2() / (params.eps * params.eps) * total_pairs.max(1) as f64 * log2n(n);
    log.level_demand_ratio = log
        .level_demand
        .iter()
        .enumerate()
        .map(|(i, &x)| x as f64 / (scale * (n as f64).powf((i + 1) as f64 * params.eps)))
        .collect();
    log.edges = h.edges.len();
    Ok((h.edges, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_partition_sizes() {
        // n = 256, |P| = 4, eps = 0.25: base 128, thresholds 32, 8, 2, 0.5.
        let lv = |s| ball_level(s, 256, 4, 0.25, 4);
        assert_eq!(lv(129), 0);
        assert_eq!(lv(128), 1);
        assert_eq!(lv(33), 1);
        assert_eq!(lv(32), 2);
        assert_eq!(lv(9), 2);
        assert_eq!(lv(8), 3);
        assert_eq!(lv(2), 4);
        assert_eq!(lv(1), 4);
        assert_eq!(beta_values(256, 0.25, 2), vec![4, 16, 64]);
    }
}
