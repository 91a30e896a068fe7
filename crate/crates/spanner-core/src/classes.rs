//! Machinery shared by the distance-class constructions: parameters, the
//! hitting-set sample, per-ball demand and settled sets, and the joint pass
//! over sampled shortest paths.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result, SpannerError};
use crate::graph::bfs::{layers_with, Scratch};
use crate::graph::{Graph, Subgraph, Vertex, UNREACHABLE};
use crate::math::{ceil_pow, ceil_snap, mix_seed};
use crate::par::*;
use crate::partition::{partition_unchecked, BallDistances, Segment};
use crate::preservers::for_each_source_tree;

/// Resampling attempts for the hitting set before giving up.
pub const HITTING_ATTEMPTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SublinearParams {
    pub k: usize,
    pub eps: f64,
    pub seed: u64,
}

impl SublinearParams {
    pub fn new(k: usize, eps: f64, seed: u64) -> Result<SublinearParams> {
        let p = SublinearParams { k, eps, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return invalid("k must be at least 1");
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return invalid(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        Ok(())
    }

    /// d + 2^{30k/eps} · d^{1−1/k}.
    pub fn budget(&self, d: u64) -> f64 {
        d as f64 + (30.0 * self.k as f64 / self.eps).exp2() * (d as f64).powf(1.0 - 1.0 / self.k as f64)
    }

    /// ⌈D^{1−1/k}⌉.
    pub fn class_radius(&self, class: usize) -> usize {
        ceil_pow(class as f64, 1.0 - 1.0 / self.k as f64).max(1)
    }

    /// Sampled paths shorter than this are processed for the class.
    pub fn path_window(&self, class: usize) -> f64 {
        2.0 * class as f64 + 4.0 * (10.0 / self.eps).exp2() * self.class_radius(class) as f64
    }

    /// Additive slack under which two same-level centers count as tight.
    pub fn tight_slack(&self, class: usize) -> f64 {
        let k = self.k as f64;
        (3.0 * ((30.0 * k - 20.0) / self.eps).exp2() + 10.0 * (10.0 / self.eps).exp2())
            * self.class_radius(class) as f64
    }

    /// ⌈1/eps⌉.
    pub fn level_count(&self) -> usize {
        ceil_snap(1.0 / self.eps).max(1)
    }

    pub fn lower(&self, seed: u64) -> SublinearParams {
        SublinearParams { k: self.k - 1, eps: self.eps, seed }
    }
}

/// 1, 2, 4, …, 2^{⌊log₂ n⌋}.
pub fn distance_classes(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    (0..=n.ilog2()).map(|i| 1usize << i).collect()
}

/// The class D with D ≤ d < 2D.
pub fn class_of(d: u32) -> usize {
    1usize << d.max(1).ilog2()
}

/// Uniform sample of `size` vertices (capped at n), sorted.
pub fn sample_vertices(n: usize, size: usize, seed: u64) -> Vec<Vertex> {
    let size = size.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<Vertex> = index::sample(&mut rng, n, size).into_iter().map(|v| v as Vertex).collect();
    s.sort_unstable();
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct HittingSample {
    pub vertices: Vec<Vertex>,
    pub attempts: usize,
    pub requested: usize,
}

/// Samples until every listed ball of every class meets the sample.
/// `must_hit[class]` lists member sets of the balls that have to be hit.
pub fn sample_hitting_set(n: usize, size: usize, seed: u64, must_hit: &[Vec<&[Vertex]>]) -> Result<HittingSample> {
    for attempt in 0..HITTING_ATTEMPTS {
        let vertices = sample_vertices(n, size, mix_seed(seed, 0x5eed, attempt as u64));
        let mut mark = vec![false; n];
        for &v in &vertices {
            mark[v as usize] = true;
        }
        let hits = must_hit.iter().flatten().all(|members| members.iter().any(|&v| mark[v as usize]));
        if hits {
            return Ok(HittingSample { vertices, attempts: attempt + 1, requested: size });
        }
    }
    Err(SpannerError::HittingSetExhausted { attempts: HITTING_ATTEMPTS })
}

/// Demand pairs 𝓟_c and settled sets U_c for every ball of one class.
#[derive(Clone, Debug, Default)]
pub struct BallDemand {
    pub pairs: Vec<BTreeSet<(Vertex, Vertex)>>,
    pub settled: Vec<HashSet<Vertex>>,
}

impl BallDemand {
    pub fn new(balls: usize) -> BallDemand {
        BallDemand { pairs: vec![BTreeSet::new(); balls], settled: vec![HashSet::new(); balls] }
    }

    pub fn both_settled(&self, ball: usize, s: Vertex, t: Vertex) -> bool {
        let u = &self.settled[ball];
        u.contains(&s) && u.contains(&t)
    }

    pub fn max_pairs(&self) -> usize {
        self.pairs.iter().map(|p| p.len()).max().unwrap_or(0)
    }

    /// |𝓟_c| → number of balls.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for p in &self.pairs {
            *h.entry(p.len()).or_insert(0) += 1;
        }
        h
    }

    /// Adds the segment's endpoints as a demand pair of its host ball after
    /// checking s_i ∈ B(c,r), t_i ∈ B(c,2r) and the segment ⊆ B(c,4r).
    pub fn insert_checked(&mut self, balls: &BallDistances, path: &[Vertex], seg: &Segment) -> Result<bool> {
        let (s, t) = (path[seg.start], path[seg.end]);
        if !balls.within(seg.ball, s, 1)
            || !balls.within(seg.ball, t, 2)
            || !path[seg.start..=seg.end].iter().all(|&v| balls.within(seg.ball, v, 4))
        {
            return Err(SpannerError::Invariant(format!(
                "demand pair ({s}, {t}) does not fit ball {}",
                seg.ball
            )));
        }
        if s == t {
            return Ok(false);
        }
        Ok(self.pairs[seg.ball].insert((s.min(t), s.max(t))))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PassStats {
    /// Sampled paths within the class window.
    pub paths: usize,
    pub skipped_settled: usize,
    /// Paths whose host balls were all ineligible.
    pub skipped_ineligible: usize,
    pub served: usize,
    pub pairs_added: usize,
}

/// One class taking part in a joint hitting pass.
pub struct HittingClass<'a> {
    pub balls: &'a BallDistances<'a>,
    pub window: f64,
    /// Balls that collect demand and settle vertices.
    pub eligible: Vec<bool>,
    pub demand: BallDemand,
    pub stats: PassStats,
}

impl<'a> HittingClass<'a> {
    pub fn new(balls: &'a BallDistances<'a>, window: f64, eligible: Vec<bool>) -> HittingClass<'a> {
        let count = balls.clustering().balls.len();
        HittingClass { balls, window, eligible, demand: BallDemand::new(count), stats: PassStats::default() }
    }

    fn process(&mut self, path: &[Vertex]) -> Result<()> {
        let (s, t) = (path[0], *path.last().unwrap());
        let part = partition_unchecked(path, self.balls);
        let hosts: Vec<&Segment> = part.segments.iter().filter(|seg| self.eligible[seg.ball]).collect();
        if hosts.is_empty() {
            self.stats.skipped_ineligible += 1;
            return Ok(());
        }
        if hosts.iter().any(|seg| self.demand.both_settled(seg.ball, s, t)) {
            self.stats.skipped_settled += 1;
            return Ok(());
        }
        self.stats.served += 1;
        for seg in hosts {
            if self.demand.insert_checked(self.balls, path, seg)? {
                self.stats.pairs_added += 1;
            }
            self.demand.settled[seg.ball].insert(s);
            self.demand.settled[seg.ball].insert(t);
        }
        Ok(())
    }
}

/// Walks every pair of sampled vertices once, in ascending (s, t) order, and
/// feeds each tie-broken path to every class whose window it fits.
pub fn hitting_pass(g: &Graph, sample: &[Vertex], classes: &mut [HittingClass]) -> Result<()> {
    let widest = classes.iter().map(|c| c.window).fold(0.0, f64::max);
    if classes.is_empty() || sample.len() < 2 {
        return Ok(());
    }
    let mut failure = None;
    for_each_source_tree(g, sample, |s, tree| {
        if failure.is_some() {
            return;
        }
        for &t in sample.iter().filter(|&&t| t > s) {
            let d = tree.dist[t as usize];
            if d == UNREACHABLE || d as f64 >= widest {
                continue;
            }
            let mut path: Option<Vec<Vertex>> = None;
            for class in classes.iter_mut() {
                if d as f64 >= class.window {
                    continue;
                }
                class.stats.paths += 1;
                // The first host is the ball of s; if it already settled both
                // endpoints the partition is not needed.
                let h = class.balls.host(s);
                if class.eligible[h] && class.demand.both_settled(h, s, t) {
                    class.stats.skipped_settled += 1;
                    continue;
                }
                let p = path.get_or_insert_with(|| tree.path_to(t).unwrap());
                if let Err(e) = class.process(p) {
                    failure = Some(e);
                    return;
                }
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// BFS tree of B(c, 4r) rooted at c, for every ball.
pub fn ball_trees(g: &Graph, balls: &BallDistances) -> Vec<Vec<(Vertex, Vertex)>> {
    let cl = balls.clustering();
    (0..cl.balls.len())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&i| {
            let b = &cl.balls[i];
            let depth = b.radius.saturating_mul(4);
            let l = layers_with(g, b.center, depth, &mut Scratch::new(g.n()));
            l.tree_edges_within(depth).collect()
        })
        .collect()
}

/// G[B(c, 4r)] with the given parent-id pairs translated to local ids.
pub fn ball_instance(
    g: &Graph,
    balls: &BallDistances,
    ball: usize,
    pairs: &BTreeSet<(Vertex, Vertex)>,
) -> Result<(Subgraph, Vec<(Vertex, Vertex)>)> {
    let sub = g.induced(&balls.outer_members(ball));
    let mut local = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        match (sub.to_local(s), sub.to_local(t)) {
            (Some(a), Some(b)) => local.push((a, b)),
            _ => {
                return Err(SpannerError::Invariant(format!("pair ({s}, {t}) leaves ball {ball}")));
            }
        }
    }
    Ok((sub, local))
}
