//! Building blocks consumed by the main constructions: +6 pairwise and
//! all-pairs spanners, and the randomized (2k−1)-multiplicative spanner.
//!
//! The +6 spanners start from a clustering scaffold (all edges at vertices of
//! degree ≤ h, plus one edge from every heavy vertex to a sampled center) and
//! then buy the tie-broken shortest path of every demand pair whose spanner
//! distance still exceeds its graph distance by more than 6. The error bound
//! therefore holds exactly by construction; the scaffold is what keeps the
//! number of purchases small.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::bfs::{distances_from, Adjacency, DynamicGraph, ShortestPathTree};
use crate::graph::{normalize_pairs, Graph, Vertex, UNREACHABLE};
use crate::preservers::for_each_source_tree;
use crate::spanner::{EdgeCollector, Rule, SpannerResult};

/// Additive error the path-buying spanners guarantee.
pub const BASE_ERROR: u32 = 6;

#[derive(Clone, Debug, Default, Serialize)]
pub struct BaseLog {
    pub pairs: usize,
    pub degree_threshold: usize,
    pub centers: usize,
    pub scaffold_edges: usize,
    pub bought_paths: usize,
    pub edges: usize,
    /// |E(H)| divided by the size form (n·|P|^{1/4} or n^{4/3}).
    pub size_constant: f64,
    pub unreachable: Vec<(Vertex, Vertex)>,
}

/// Spanner edges mirrored in an adjacency structure for distance queries.
struct Growing {
    collector: EdgeCollector,
    adj: DynamicGraph,
}

impl Growing {
    fn new(n: usize) -> Growing {
        Growing { collector: EdgeCollector::new(), adj: DynamicGraph::new(n) }
    }

    fn add(&mut self, u: Vertex, v: Vertex, rule: Rule) -> bool {
        self.adj.add_edge(u, v);
        self.collector.add(u, v, rule)
    }
}

fn scaffold(g: &Graph, h: usize, seed: u64, out: &mut Growing) -> usize {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (2.0 * ((n + 1) as f64).ln() / h as f64).min(1.0);
    let sampled: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < p).collect();
    let mut centers = 0;
    for v in 0..n as Vertex {
        if g.degree(v) <= h {
            for &u in g.neighbors(v) {
                out.add(v, u, Rule::LowDegree);
            }
        } else if sampled[v as usize] {
            centers += 1;
        } else if let Some(&c) = g.neighbors(v).iter().find(|&&u| sampled[u as usize]) {
            out.add(v, c, Rule::ClusterStar);
        } else {
            for &u in g.neighbors(v) {
                out.add(v, u, Rule::Unclustered);
            }
        }
    }
    centers
}

/// Greedy purchase for one source: every target whose spanner distance is more
/// than `slack` above the graph distance gets its path bought.
fn serve_source(
    tree: &ShortestPathTree,
    targets: &[Vertex],
    slack: u32,
    out: &mut Growing,
    unreachable: &mut Vec<(Vertex, Vertex)>,
) -> usize {
    let s = tree.source;
    let mut dist_h = distances_from(&out.adj, s);
    let mut bought = 0;
    let mut queue = VecDeque::new();
    for &t in targets {
        let dg = tree.dist[t as usize];
        if dg == UNREACHABLE {
            unreachable.push((s, t));
            continue;
        }
        let dh = dist_h[t as usize];
        if dh != UNREACHABLE && dh <= dg + slack {
            continue;
        }
        bought += 1;
        for (a, b) in tree.path_edges(t) {
            out.add(a, b, Rule::BoughtPath);
        }
        // Path vertices are now at their true distance; relax from them.
        let mut v = t;
        loop {
            let dv = tree.dist[v as usize];
            if dist_h[v as usize] > dv {
                dist_h[v as usize] = dv;
                queue.push_back(v);
            }
            if v == s {
                break;
            }
            v = tree.parent[v as usize];
        }
        while let Some(u) = queue.pop_front() {
            let next = dist_h[u as usize] + 1;
            for &w in out.adj.adjacent(u) {
                if dist_h[w as usize] > next {
                    dist_h[w as usize] = next;
                    queue.push_back(w);
                }
            }
        }
    }
    bought
}

fn check_pairs(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Result<()> {
    for &(u, v) in pairs {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
    }
    Ok(())
}

fn ceil_root(x: usize, root: u32) -> usize {
    let v = (x.max(1) as f64).powf(1.0 / root as f64);
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as usize
    } else {
        v.ceil() as usize
    }
}

/// +6 pairwise spanner with O(n·|P|^{1/4}) edges.
pub fn pairwise6(g: &Graph, pairs: &[(Vertex, Vertex)], seed: u64) -> Result<SpannerResult<BaseLog>> {
    check_pairs(g, pairs)?;
    let pairs: Vec<_> = normalize_pairs(pairs).into_iter().filter(|(u, v)| u != v).collect();
    let h = ceil_root(pairs.len(), 4).max(1);
    let mut out = Growing::new(g.n());
    let mut log = BaseLog { pairs: pairs.len(), degree_threshold: h, ..Default::default() };
    log.centers = scaffold(g, h, seed, &mut out);
    log.scaffold_edges = out.collector.len();
    let mut by_source: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(u, v) in &pairs {
        by_source.entry(u).or_default().push(v);
    }
    let sources: Vec<Vertex> = by_source.keys().copied().collect();
    let mut unreachable = Vec::new();
    for_each_source_tree(g, &sources, |s, tree| {
        log.bought_paths += serve_source(tree, &by_source[&s], BASE_ERROR, &mut out, &mut unreachable);
    });
    log.unreachable = unreachable;
    log.edges = out.collector.len();
    log.size_constant = log.edges as f64 / (g.n().max(1) as f64 * (pairs.len().max(1) as f64).powf(0.25));
    Ok(SpannerResult::from_collector(out.collector, log))
}

/// +6 spanner for all pairs with O(n^{4/3}) edges.
pub fn allpairs6(g: &Graph, seed: u64) -> Result<SpannerResult<BaseLog>> {
    let n = g.n();
    let h = ceil_root(n, 3).max(1);
    let mut out = Growing::new(n);
    let mut log = BaseLog {
        pairs: n * n.saturating_sub(1) / 2,
        degree_threshold: h,
        ..Default::default()
    };
    log.centers = scaffold(g, h, seed, &mut out);
    log.scaffold_edges = out.collector.len();
    let sources: Vec<Vertex> = (0..n as Vertex).collect();
    let mut unreachable = Vec::new();
    for_each_source_tree(g, &sources, |s, tree| {
        let targets: Vec<Vertex> = (s + 1..n as Vertex).filter(|&t| tree.reaches(t)).collect();
        log.bought_paths += serve_source(tree, &targets, BASE_ERROR, &mut out, &mut unreachable);
    });
    log.edges = out.collector.len();
    log.size_constant = log.edges as f64 / (n.max(1) as f64).powf(4.0 / 3.0);
    Ok(SpannerResult::from_collector(out.collector, log))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MultiplicativeLog {
    pub k: usize,
    pub clusters_per_round: Vec<usize>,
    pub edges: usize,
    /// |E(H)| / n^{1+1/k}.
    pub size_constant: f64,
}

/// Randomized clustering (2k−1)-spanner with O(k·n^{1+1/k}) expected edges.
///
/// Rounds 1..k−1 sample surviving clusters with probability n^{−1/k}; a
/// vertex next to a sampled cluster joins it through one edge, any other
/// vertex keeps one edge to each neighboring cluster and leaves. A final round
/// keeps one edge from every vertex to each neighboring cluster.
pub fn multiplicative_spanner(g: &Graph, k: usize, seed: u64) -> Result<SpannerResult<MultiplicativeLog>> {
    if k < 1 {
        return invalid("k must be at least 1");
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (n.max(1) as f64).powf(-1.0 / k as f64);
    let mut cluster: Vec<Option<Vertex>> = (0..n as Vertex).map(Some).collect();
    // Residual edges per vertex, as sorted neighbor lists.
    let mut residual: Vec<Vec<Vertex>> = (0..n as Vertex).map(|v| g.neighbors(v).to_vec()).collect();
    let mut out = EdgeCollector::new();
    let mut log = MultiplicativeLog { k, ..Default::default() };

    for _ in 1..k {
        let mut ids: Vec<Vertex> = cluster.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        log.clusters_per_round.push(ids.len());
        let mut sampled = vec![false; n];
        for &c in &ids {
            sampled[c as usize] = rng.gen::<f64>() < p;
        }
        let mut next = vec![None; n];
        let mut removals: Vec<(Vertex, Vertex)> = Vec::new();
        for v in 0..n as Vertex {
            let Some(cv) = cluster[v as usize] else { continue };
            if sampled[cv as usize] {
                next[v as usize] = Some(cv);
                continue;
            }
            let join = residual[v as usize]
                .iter()
                .copied()
                .find(|&u| cluster[u as usize].is_some_and(|c| sampled[c as usize]));
            match join {
                Some(u) => {
                    let target = cluster[u as usize].unwrap();
                    out.add(v, u, Rule::Multiplicative);
                    next[v as usize] = Some(target);
                    for &w in &residual[v as usize] {
                        if cluster[w as usize] == Some(target) {
                            removals.push((v, w));
                        }
                    }
                }
                None => {
                    let mut seen: Vec<Vertex> = Vec::new();
                    for &w in &residual[v as usize] {
                        if let Some(c) = cluster[w as usize] {
                            if !seen.contains(&c) {
                                seen.push(c);
                                out.add(v, w, Rule::Multiplicative);
                            }
                            removals.push((v, w));
                        }
                    }
                }
            }
        }
        for (a, b) in removals {
            remove_edge(&mut residual, a, b);
        }
        cluster = next;
        for v in 0..n {
            if cluster[v].is_none() {
                continue;
            }
            let cv = cluster[v];
            let same: Vec<Vertex> =
                residual[v].iter().copied().filter(|&w| cluster[w as usize] == cv).collect();
            for w in same {
                remove_edge(&mut residual, v as Vertex, w);
            }
        }
    }

    for v in 0..n as Vertex {
        let mut seen: Vec<Option<Vertex>> = Vec::new();
        for &w in &residual[v as usize] {
            let c = cluster[w as usize];
            if c.is_none() || !seen.contains(&c) {
                seen.push(c);
                out.add(v, w, Rule::Multiplicative);
            }
        }
    }
    log.edges = out.len();
    log.size_constant = log.edges as f64 / (n.max(1) as f64).powf(1.0 + 1.0 / k as f64);
    Ok(SpannerResult::from_collector(out, log))
}

fn remove_edge(residual: &mut [Vec<Vertex>], a: Vertex, b: Vertex) {
    if let Ok(i) = residual[a as usize].binary_search(&b) {
        residual[a as usize].remove(i);
    }
    if let Ok(i) = residual[b as usize].binary_search(&a) {
        residual[b as usize].remove(i);
    }
}
