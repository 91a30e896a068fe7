//! Bottleneck radii, consistent shortest-path families and distance preservers.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::bfs::{layers, ShortestPathTree};
use crate::graph::{normalize_pairs, EdgeSet, Graph, Vertex};
use crate::par::*;

#[derive(Clone, Debug, Serialize)]
pub struct Bottleneck {
    pub radius: usize,
    /// Layers at distance `radius` and `radius + 1`, sorted.
    pub boundary: Vec<Vertex>,
    /// |B(c, r)| for the outer radius r.
    pub ball_size: usize,
}

/// Picks d in (r1, r2] minimizing the two-layer boundary |B⁼(c,d) ∪ B⁼(c,d+1)|,
/// lowest d on ties. One truncated search to depth r.
pub fn bottleneck(g: &Graph, c: Vertex, r1: usize, r2: usize, r: usize) -> Result<Bottleneck> {
    if !(0 < r1 && r1 < r2 && r2 < r) {
        return invalid(format!("need 0 < r1 < r2 < r, got r1={r1} r2={r2} r={r}"));
    }
    let l = layers(g, c, r)?;
    let pair = |d: usize| l.layer(d).len() + l.layer(d + 1).len();
    let radius = (r1 + 1..=r2).min_by_key(|&d| (pair(d), d)).unwrap();
    let mut boundary: Vec<Vertex> = l.layer(radius).iter().chain(l.layer(radius + 1)).copied().collect();
    boundary.sort_unstable();
    Ok(Bottleneck { radius, boundary, ball_size: l.size_within(r) })
}

pub fn bottleneck_radius(g: &Graph, c: Vertex, r1: usize, r2: usize, r: usize) -> Result<usize> {
    bottleneck(g, c, r1, r2, r).map(|b| b.radius)
}

/// Calls `visit(s, tree_from_s)` for each source in the given order. Trees
/// are built in parallel batches and visited sequentially.
pub fn for_each_source_tree<F>(g: &Graph, sources: &[Vertex], mut visit: F)
where
    F: FnMut(Vertex, &ShortestPathTree),
{
    let batch = 4 * current_num_threads().max(1);
    for chunk in sources.chunks(batch) {
        let trees: Vec<ShortestPathTree> =
            chunk.par_iter().map(|&s| ShortestPathTree::build_unchecked(g, s)).collect();
        for (s, tree) in chunk.iter().zip(&trees) {
            visit(*s, tree);
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistentPathFamily {
    pub paths: BTreeMap<(Vertex, Vertex), Vec<Vertex>>,
    pub union: EdgeSet,
    /// Pairs of S in different components.
    pub unreachable: Vec<(Vertex, Vertex)>,
}

impl ConsistentPathFamily {
    pub fn union_size(&self) -> usize {
        self.union.len()
    }
}

/// Tie-broken shortest paths between every pair of `terminals`.
pub fn consistent_paths(g: &Graph, terminals: &[Vertex]) -> Result<ConsistentPathFamily> {
    for &v in terminals {
        g.check_vertex(v)?;
    }
    let mut s: Vec<Vertex> = terminals.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut family = ConsistentPathFamily::default();
    let mut edges = Vec::new();
    // The paths from one source form a subtree; walk each up only until it
    // meets a vertex already walked for this source.
    let mut walked = vec![Vertex::MAX; g.n()];
    for_each_source_tree(g, &s, |src, tree| {
        walked[src as usize] = src;
        for &t in s.iter().filter(|&&t| t > src) {
            match tree.path_to(t) {
                Some(p) => {
                    for w in p.windows(2).rev() {
                        if walked[w[1] as usize] == src {
                            break;
                        }
                        walked[w[1] as usize] = src;
                        edges.push((w[0], w[1]));
                    }
                    family.paths.insert((src, t), p);
                }
                None => family.unreachable.push((src, t)),
            }
        }
    });
    family.union = EdgeSet::from_pairs(edges);
    Ok(family)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Preserver {
    pub edges: EdgeSet,
    pub unreachable: Vec<(Vertex, Vertex)>,
}

/// Union of tie-broken shortest paths over `pairs`.
pub fn distance_preserver(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Result<Preserver> {
    for &(u, v) in pairs {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
    }
    let pairs = normalize_pairs(pairs);
    let mut by_source: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(u, v) in &pairs {
        if u != v {
            by_source.entry(u).or_default().push(v);
        }
    }
    let groups: Vec<(Vertex, Vec<Vertex>)> = by_source.into_iter().collect();
    let parts: Vec<(Vec<(Vertex, Vertex)>, Vec<(Vertex, Vertex)>)> = groups
        .par_iter()
        .map(|(s, targets)| {
            let tree = ShortestPathTree::build_unchecked(g, *s);
            let mut edges = Vec::new();
            let mut missing = Vec::new();
            for &t in targets {
                if tree.reaches(t) {
                    edges.extend(tree.path_edges(t));
                } else {
                    missing.push((*s, t));
                }
            }
            (edges, missing)
        })
        .collect();
    let mut unreachable = Vec::new();
    let mut all = Vec::new();
    for (e, m) in parts {
        all.extend(e);
        unreachable.extend(m);
    }
    Ok(Preserver { edges: EdgeSet::from_pairs(all), unreachable })
}
