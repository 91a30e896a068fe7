//! Breadth-first search primitives: distances, truncated layered searches,
//! balls and their boundaries, and rank-tie-broken shortest-path trees.

use std::collections::VecDeque;

use super::{Graph, Vertex, UNREACHABLE};
use crate::error::{invalid, Result};

/// Read access to an unweighted adjacency structure.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn adjacent(&self, v: Vertex) -> &[Vertex];
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn adjacent(&self, v: Vertex) -> &[Vertex] {
        self.neighbors(v)
    }
}

/// Growable adjacency lists for spanners under construction.
#[derive(Clone, Debug, Default)]
pub struct DynamicGraph {
    adj: Vec<Vec<Vertex>>,
    edges: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> DynamicGraph {
        DynamicGraph { adj: vec![Vec::new(); n], edges: 0 }
    }

    /// Returns true when the edge is new.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        match self.adj[u as usize].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u as usize].insert(pos, v);
                let pos = self.adj[v as usize].binary_search(&u).unwrap_err();
                self.adj[v as usize].insert(pos, u);
                self.edges += 1;
                true
            }
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }
}

impl Adjacency for DynamicGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }
    fn adjacent(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }
}

/// Connected-component label of every vertex, labels in order of first vertex.
pub fn components<A: Adjacency + ?Sized>(g: &A) -> Vec<u32> {
    let n = g.vertex_count();
    let mut comp = vec![u32::MAX; n];
    let mut stack = Vec::new();
    let mut next = 0;
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        comp[s] = next;
        stack.push(s as Vertex);
        while let Some(u) = stack.pop() {
            for &w in g.adjacent(u) {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Hop distances from `source` over any adjacency.
pub fn distances_from<A: Adjacency + ?Sized>(g: &A, source: Vertex) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for &v in g.adjacent(u) {
            if dist[v as usize] == UNREACHABLE {
                dist[v as usize] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn bfs_distances(g: &Graph, source: Vertex) -> Result<Vec<u32>> {
    g.check_vertex(source)?;
    Ok(distances_from(g, source))
}

/// Reusable marks for truncated searches, so repeated local searches cost
/// only what they touch.
#[derive(Clone, Debug)]
pub struct Scratch {
    dist: Vec<u32>,
    touched: Vec<Vertex>,
}

impl Scratch {
    pub fn new(n: usize) -> Scratch {
        Scratch { dist: vec![UNREACHABLE; n], touched: Vec::new() }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = UNREACHABLE;
        }
        self.touched.clear();
    }
}

/// Result of a BFS truncated at some depth: vertices in visiting order,
/// grouped by distance, with the BFS parent of each.
#[derive(Clone, Debug)]
pub struct Layers {
    pub center: Vertex,
    pub order: Vec<Vertex>,
    pub parent: Vec<Vertex>,
    /// `starts[d]..starts[d + 1]` indexes the vertices at distance d.
    starts: Vec<usize>,
}

impl Layers {
    /// Deepest layer explored.
    pub fn depth(&self) -> usize {
        self.starts.len() - 2
    }

    /// True once the last explored layer is empty, i.e. the whole component
    /// has been visited and every deeper query is answered.
    pub fn is_exhausted(&self) -> bool {
        self.layer(self.depth()).is_empty()
    }

    pub fn answers(&self, r: usize) -> bool {
        r <= self.depth() || self.is_exhausted()
    }

    pub fn layer(&self, d: usize) -> &[Vertex] {
        if d > self.depth() {
            return &[];
        }
        &self.order[self.starts[d]..self.starts[d + 1]]
    }

    /// Vertices within distance `r`, in visiting order.
    pub fn within(&self, r: usize) -> &[Vertex] {
        debug_assert!(self.answers(r));
        let r = r.min(self.depth());
        &self.order[..self.starts[r + 1]]
    }

    pub fn size_within(&self, r: usize) -> usize {
        self.within(r).len()
    }

    pub fn tree_edges_within(&self, r: usize) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.size_within(r);
        (1..k).map(move |i| (self.parent[i], self.order[i]))
    }
}

/// BFS from `c` down to depth `depth`, touching only vol(B(c, depth)) edges.
pub fn layers_with(g: &Graph, c: Vertex, depth: usize, scratch: &mut Scratch) -> Layers {
    scratch.reset();
    scratch.dist[c as usize] = 0;
    scratch.touched.push(c);
    let mut layers = Layers { center: c, order: vec![c], parent: vec![c], starts: vec![0, 1] };
    extend_layers(g, &mut layers, depth, scratch);
    layers
}

/// Continues a search started by [`layers_with`] with the same scratch, which
/// must not have been used for anything else in between.
pub fn extend_layers(g: &Graph, layers: &mut Layers, depth: usize, scratch: &mut Scratch) {
    while layers.depth() < depth && !layers.is_exhausted() {
        let d = layers.depth();
        let (lo, hi) = (layers.starts[d], layers.starts[d + 1]);
        for i in lo..hi {
            let u = layers.order[i];
            for &v in g.neighbors(u) {
                if scratch.dist[v as usize] == UNREACHABLE {
                    scratch.dist[v as usize] = d as u32 + 1;
                    scratch.touched.push(v);
                    layers.order.push(v);
                    layers.parent.push(u);
                }
            }
        }
        layers.starts.push(layers.order.len());
    }
}

pub fn layers(g: &Graph, c: Vertex, depth: usize) -> Result<Layers> {
    g.check_vertex(c)?;
    Ok(layers_with(g, c, depth, &mut Scratch::new(g.n())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Vertex,
    pub radius: usize,
    /// Sorted ascending.
    pub members: Vec<Vertex>,
}

impl Ball {
    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn ball(g: &Graph, c: Vertex, r: usize) -> Result<Ball> {
    let l = layers(g, c, r)?;
    let mut members = l.within(r).to_vec();
    members.sort_unstable();
    Ok(Ball { center: c, radius: r, members })
}

/// Vertices at distance exactly `d` from `c`, sorted.
pub fn ball_boundary(g: &Graph, c: Vertex, d: usize) -> Result<Vec<Vertex>> {
    let l = layers(g, c, d)?;
    let mut out = l.layer(d).to_vec();
    out.sort_unstable();
    Ok(out)
}

/// Shortest-path tree under the (hop count, summed edge rank) order.
///
/// Along with hop distance every vertex carries the smallest rank sum over its
/// shortest paths; a vertex settled at layer d fixes the keys of layer d + 1.
/// Exact key ties fall back to the smaller parent id and are counted.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub source: Vertex,
    pub dist: Vec<u32>,
    pub parent: Vec<Vertex>,
    pub rank_sum: Vec<u128>,
    /// Number of exact key ties seen (expected to be zero).
    pub ties: usize,
}

impl ShortestPathTree {
    pub fn build(g: &Graph, source: Vertex) -> Result<ShortestPathTree> {
        g.check_vertex(source)?;
        Ok(Self::build_unchecked(g, source))
    }

    pub(crate) fn build_unchecked(g: &Graph, source: Vertex) -> ShortestPathTree {
        let n = g.n();
        let mut dist = vec![UNREACHABLE; n];
        let mut parent = vec![UNREACHABLE; n];
        let mut rank_sum = vec![0u128; n];
        let mut ties = 0;
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        parent[source as usize] = source;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u as usize] + 1;
            let base = rank_sum[u as usize];
            for (&v, &w) in g.neighbors(u).iter().zip(g.neighbor_ranks(u)) {
                let vi = v as usize;
                let cand = base + w as u128;
                if dist[vi] == UNREACHABLE {
                    dist[vi] = next;
                    rank_sum[vi] = cand;
                    parent[vi] = u;
                    queue.push_back(v);
                } else if dist[vi] == next {
                    if cand < rank_sum[vi] {
                        rank_sum[vi] = cand;
                        parent[vi] = u;
                    } else if cand == rank_sum[vi] && u != parent[vi] {
                        ties += 1;
                        parent[vi] = parent[vi].min(u);
                    }
                }
            }
        }
        ShortestPathTree { source, dist, parent, rank_sum, ties }
    }

    pub fn reaches(&self, t: Vertex) -> bool {
        self.dist[t as usize] != UNREACHABLE
    }

    /// Path from the source to `t`, or None when unreachable.
    pub fn path_to(&self, t: Vertex) -> Option<Vec<Vertex>> {
        if !self.reaches(t) {
            return None;
        }
        let mut path = Vec::with_capacity(self.dist[t as usize] as usize + 1);
        let mut v = t;
        path.push(v);
        while v != self.source {
            v = self.parent[v as usize];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Edges of the path from the source to `t`, walking up from `t`.
    pub fn path_edges(&self, t: Vertex) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let mut v = t;
        std::iter::from_fn(move || {
            if v == self.source || !self.reaches(v) {
                None
            } else {
                let p = self.parent[v as usize];
                let e = (p, v);
                v = p;
                Some(e)
            }
        })
    }
}

/// The tie-broken shortest path from `s` to `t`; None when unreachable.
pub fn unique_shortest_path(g: &Graph, s: Vertex, t: Vertex) -> Result<Option<Vec<Vertex>>> {
    g.check_vertex(t)?;
    Ok(ShortestPathTree::build(g, s)?.path_to(t))
}

/// Checks that `path` is a walk along edges of `g` with no repeated vertex.
pub fn check_simple_path(g: &Graph, path: &[Vertex]) -> Result<()> {
    if path.is_empty() {
        return invalid("empty path");
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(crate::error::SpannerError::NotAPath(format!(
                "no edge between {} and {}",
                w[0], w[1]
            )));
        }
    }
    let mut sorted = path.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(crate::error::SpannerError::NotAPath("repeated vertex".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: u32) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n as usize, &edges).unwrap()
    }

    #[test]
    fn path_distances() {
        assert_eq!(bfs_distances(&path_graph(5), 0).unwrap(), vec![0, 1, 2, 3, 4]);
        let single = Graph::from_edges(1, &[]).unwrap();
        assert_eq!(bfs_distances(&single, 0).unwrap(), vec![0]);
        assert!(bfs_distances(&single, 1).is_err());
    }

    #[test]
    fn balls_and_boundaries_on_a_path() {
        let g = path_graph(9);
        assert_eq!(ball(&g, 4, 2).unwrap().members, vec![2, 3, 4, 5, 6]);
        assert_eq!(ball(&g, 4, 0).unwrap().members, vec![4]);
        assert_eq!(ball_boundary(&g, 4, 2).unwrap(), vec![2, 6]);
        assert!(ball_boundary(&g, 4, 10).unwrap().is_empty());
    }

    #[test]
    fn tree_paths_are_the_tree_paths() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        assert_eq!(unique_shortest_path(&g, 2, 5).unwrap().unwrap(), vec![2, 1, 3, 5]);
        let h = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(unique_shortest_path(&h, 0, 2).unwrap(), None);
    }

    #[test]
    fn scratch_reuse_matches_fresh_search() {
        let g = path_graph(30);
        let mut scratch = Scratch::new(g.n());
        let a = layers_with(&g, 3, 4, &mut scratch);
        let b = layers_with(&g, 20, 2, &mut scratch);
        assert_eq!(a.size_within(4), 8);
        assert_eq!(b.size_within(2), 5);
        assert_eq!(b.layer(2).len(), 2);
        assert_eq!(b.tree_edges_within(2).count(), 4);
    }

    #[test]
    fn dynamic_graph_dedups() {
        let mut h = DynamicGraph::new(4);
        assert!(h.add_edge(0, 1));
        assert!(!h.add_edge(1, 0));
        assert!(h.add_edge(2, 1));
        assert_eq!(h.edge_count(), 2);
        assert_eq!(distances_from(&h, 0), vec![0, 1, 2, UNREACHABLE]);
    }
}
