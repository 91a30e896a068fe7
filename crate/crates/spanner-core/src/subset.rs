//! Subset additive spanners on a terminal set U.
//!
//! The graph is clustered with base radius ⌈|U|^{3/2}⌉ and growth exponent
//! 10/(eps·log₂ n), so radii stay within R·n^eps. Small balls
//! (|B(c,r)| ≤ |U|²) pick a bottleneck radius d ∈ (r, 2r] and keep the
//! tie-broken paths between all vertices of the two layers at distance d and
//! d+1. Terminal paths then buy their stretches outside the small balls
//! B(c,d), unless a large ball met along the path has already settled both
//! endpoints.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::classes::ball_trees;
use crate::clustering::build_clustering;
use crate::error::{invalid, Result};
use crate::graph::bfs::layers;
use crate::graph::{Graph, Vertex};
use crate::math::{ceil_pow, log2n};
use crate::par::*;
use crate::partition::BallDistances;
use crate::preservers::{bottleneck, consistent_paths, for_each_source_tree};
use crate::spanner::{EdgeCollector, Rule, SpannerResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Uncovered,
    Covered,
    CoveredAtBoundary,
}

/// The small-ball family B(c, d) with per-vertex membership.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SmallBallCover {
    /// (center, d) per small ball, in clustering order.
    pub balls: Vec<(Vertex, usize)>,
    /// For each vertex, (small-ball index, distance to its center) of every
    /// B(c, d) containing it.
    pub membership: Vec<Vec<(u32, u32)>>,
}

impl SmallBallCover {
    pub fn status(&self, v: Vertex) -> Coverage {
        let m = &self.membership[v as usize];
        if m.is_empty() {
            Coverage::Uncovered
        } else if m.iter().all(|&(b, dist)| dist as usize == self.balls[b as usize].1) {
            Coverage::CoveredAtBoundary
        } else {
            Coverage::Covered
        }
    }

    pub fn covered(&self, v: Vertex) -> bool {
        !self.membership[v as usize].is_empty()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SubsetLog {
    pub terminals: usize,
    pub eps: f64,
    /// Growth exponent handed to the clustering.
    pub cluster_eps: f64,
    pub radius: usize,
    pub balls: usize,
    pub small: usize,
    pub large: usize,
    pub boundary_sizes: Vec<usize>,
    /// Small balls whose two-layer boundary exceeds 2|B(c,4r)|/r.
    pub boundary_bound_violations: usize,
    pub paths: usize,
    pub paths_skipped: usize,
    pub paths_bought: usize,
    /// Bought paths per large ball (ball index → count).
    pub bought_per_ball: BTreeMap<usize, usize>,
    /// Large balls charged for more than |U| paths.
    pub bought_count_violations: usize,
    /// Interior endpoints of maximal covered stretches not covered at boundary.
    pub boundary_endpoint_violations: usize,
    pub unreachable: Vec<(Vertex, Vertex)>,
    /// 24 · R · n^eps.
    pub error_bound: f64,
    pub edges: usize,
}

/// Additive error bound 24·⌈|U|^{3/2}⌉·n^eps.
pub fn subset_error_bound(n: usize, terminals: usize, eps: f64) -> f64 {
    24.0 * subset_radius(terminals) as f64 * (n.max(1) as f64).powf(eps)
}

fn subset_radius(terminals: usize) -> usize {
    ceil_pow(terminals.max(1) as f64, 1.5).max(1)
}

pub fn build_subset_spanner(g: &Graph, terminals: &[Vertex], eps: f64) -> Result<SpannerResult<SubsetLog>> {
    build_subset_with_cover(g, terminals, eps).map(|(r, _)| r)
}

/// As [`build_subset_spanner`], also returning the small-ball cover.
pub fn build_subset_with_cover(
    g: &Graph,
    terminals: &[Vertex],
    eps: f64,
) -> Result<(SpannerResult<SubsetLog>, SmallBallCover)> {
    if !(eps > 0.0 && eps.is_finite()) {
        return invalid("eps must be positive");
    }
    for &u in terminals {
        g.check_vertex(u)?;
    }
    let mut u: Vec<Vertex> = terminals.to_vec();
    u.sort_unstable();
    u.dedup();
    let n = g.n();
    let radius = subset_radius(u.len());
    let cluster_eps = 10.0 / (eps * log2n(n));
    let mut log = SubsetLog {
        terminals: u.len(),
        eps,
        cluster_eps,
        radius,
        error_bound: subset_error_bound(n, u.len(), eps),
        ..Default::default()
    };
    let mut out = EdgeCollector::new();
    if n == 0 {
        return Ok((SpannerResult::from_collector(out, log), SmallBallCover::default()));
    }
    let cl = build_clustering(g, radius, cluster_eps)?;
    let balls = BallDistances::new(g, &cl)?;
    let small_limit = (u.len() * u.len()).max(1);
    let small: Vec<bool> = cl.balls.iter().map(|b| b.members.len() <= small_limit).collect();
    log.balls = cl.balls.len();
    log.small = small.iter().filter(|&&s| s).count();
    log.large = log.balls - log.small;

    for tree in ball_trees(g, &balls) {
        out.extend(tree, Rule::BallTree);
    }

    let small_ids: Vec<usize> = (0..cl.balls.len()).filter(|&b| small[b]).collect();
    let local: Vec<(usize, Vec<(Vertex, u32)>, Vec<(Vertex, Vertex)>, usize)> = small_ids
        .par_iter()
        .map(|&b| {
            let ball = &cl.balls[b];
            let r = ball.radius;
            let neck = bottleneck(g, ball.center, r, 2 * r, 4 * r)?;
            let inner = layers(g, ball.center, neck.radius)?;
            let members: Vec<(Vertex, u32)> = (0..=inner.depth().min(neck.radius))
                .flat_map(|d| inner.layer(d).iter().map(move |&v| (v, d as u32)))
                .collect();
            let sub = g.induced(&balls.outer_members(b));
            let terms: Vec<Vertex> = neck.boundary.iter().filter_map(|&v| sub.to_local(v)).collect();
            let family = consistent_paths(&sub.graph, &terms)?;
            let edges = sub.lift(&family.union).iter().collect();
            let bound_ok = neck.boundary.len() as f64 <= 2.0 * neck.ball_size as f64 / r as f64;
            Ok((neck.radius, members, edges, if bound_ok { neck.boundary.len() } else { usize::MAX }))
        })
        .collect::<Result<_>>()?;

    let mut cover = SmallBallCover { balls: Vec::new(), membership: vec![Vec::new(); n] };
    for (&b, (d, members, edges, boundary)) in small_ids.iter().zip(local) {
        let idx = cover.balls.len() as u32;
        cover.balls.push((cl.balls[b].center, d));
        for (v, dist) in members {
            cover.membership[v as usize].push((idx, dist));
        }
        out.extend(edges, Rule::BoundaryPreserver);
        if boundary == usize::MAX {
            log.boundary_bound_violations += 1;
        } else {
            log.boundary_sizes.push(boundary);
        }
    }

    // Terminal paths, in ascending (s, t) order, streamed one source tree at
    // a time.
    let host = cl.first_host();
    let mut settled: Vec<HashSet<Vertex>> = vec![HashSet::new(); cl.balls.len()];
    for_each_source_tree(g, &u, |s, tree| {
        for &t in u.iter().filter(|&&t| t > s) {
            let Some(path) = tree.path_to(t) else {
                log.unreachable.push((s, t));
                continue;
            };
            log.paths += 1;
            for (i, &v) in path.iter().enumerate() {
                if i == 0 || i + 1 == path.len() || !cover.covered(v) {
                    continue;
                }
                let starts_run = !cover.covered(path[i - 1]);
                let ends_run = !cover.covered(path[i + 1]);
                if (starts_run || ends_run) && cover.status(v) != Coverage::CoveredAtBoundary {
                    log.boundary_endpoint_violations += 1;
                }
            }
            let mut touched: Vec<usize> =
                path.iter().map(|&x| host[x as usize] as usize).filter(|&c| !small[c]).collect();
            touched.sort_unstable();
            touched.dedup();
            if touched.iter().any(|&c| settled[c].contains(&s) && settled[c].contains(&t)) {
                log.paths_skipped += 1;
                continue;
            }
            log.paths_bought += 1;
            for w in path.windows(2) {
                if !(cover.covered(w[0]) && cover.covered(w[1])) {
                    out.add(w[0], w[1], Rule::TerminalPath);
                }
            }
            for c in touched {
                settled[c].insert(s);
                settled[c].insert(t);
                *log.bought_per_ball.entry(c).or_insert(0) += 1;
            }
        }
    });
    log.bought_count_violations = log.bought_per_ball.values().filter(|&&x| x > u.len()).count();
    log.edges = out.len();
    Ok((SpannerResult::from_collector(out, log), cover))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{gen_graph, GraphKind};

    #[test]
    fn bound_and_radius() {
        assert_eq!(subset_radius(16), 64);
        assert_eq!(subset_radius(0), 1);
        assert_eq!(subset_error_bound(16, 4, 0.5), 24.0 * 8.0 * 4.0);
    }

    #[test]
    fn status_against_brute_force() {
        let g = gen_graph(&GraphKind::Grid { rows: 9, cols: 9 }, 0).unwrap();
        let (_, cover) = build_subset_with_cover(&g, &[0, 40, 80], 0.5).unwrap();
        for v in 0..81 {
            let mut inside = Vec::new();
            for &(c, d) in &cover.balls {
                let dist = crate::graph::bfs::bfs_distances(&g, c).unwrap()[v as usize];
                if dist as usize <= d {
                    inside.push(dist as usize == d);
                }
            }
            let expect = if inside.is_empty() {
                Coverage::Uncovered
            } else if inside.iter().all(|&b| b) {
                Coverage::CoveredAtBoundary
            } else {
                Coverage::Covered
            };
            assert_eq!(cover.status(v), expect);
        }
    }
}
