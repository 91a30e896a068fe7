//! Immutable undirected graphs in CSR form, edge sets, and induced subgraphs.
//!
//! Every vertex carries a label that survives induced-subgraph extraction, and
//! each edge carries a rank derived from its endpoint labels. Ranks are what the
//! shortest-path tie-break sums, so a subgraph orders paths exactly like its
//! host does.

pub mod bfs;
pub mod generate;
pub mod io;

use serde::Serialize;

use crate::error::{invalid, Result, SpannerError};

pub type Vertex = u32;

/// Distance sentinel for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

/// Deterministic 64-bit rank of the edge between two labels.
pub fn edge_rank(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut z = ((lo as u64) << 32 | hi as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    ranks: Vec<u64>,
    labels: Vec<u32>,
}

impl Graph {
    /// Builds a graph on `0..n`. Parallel edges collapse; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        if n > u32::MAX as usize {
            return invalid("vertex count exceeds u32 range");
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(SpannerError::VertexOutOfRange { vertex: w as u64, n });
                }
            }
            if u == v {
                return Err(SpannerError::SelfLoop(u as u64));
            }
            normalized.push(if u < v { (u, v) } else { (v, u) });
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(Self::assemble(n, &normalized, (0..n as u32).collect()))
    }

    /// `edges` must be normalized (u < v), sorted and deduplicated.
    fn assemble(n: usize, edges: &[(Vertex, Vertex)], labels: Vec<u32>) -> Graph {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        // Lower neighbors first, then higher ones; both passes walk the sorted
        // edge list, so every adjacency list comes out ascending.
        for &(u, v) in edges {
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for &(u, v) in edges {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }
        let mut ranks = vec![0; targets.len()];
        for v in 0..n {
            for i in offsets[v]..offsets[v + 1] {
                ranks[i] = edge_rank(labels[v], labels[targets[i] as usize]);
            }
        }
        Graph { offsets, targets, ranks, labels }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Tie-break ranks aligned with [`Graph::neighbors`].
    pub fn neighbor_ranks(&self, v: Vertex) -> &[u64] {
        &self.ranks[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn label(&self, v: Vertex) -> u32 {
        self.labels[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (u as usize) < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn volume<I: IntoIterator<Item = Vertex>>(&self, vertices: I) -> usize {
        vertices.into_iter().map(|v| self.degree(v)).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as Vertex).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as (u, v) with u < v, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n() as Vertex).flat_map(move |u| {
            self.neighbors(u).iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet { edges: self.edges().collect() }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(SpannerError::VertexOutOfRange { vertex: v as u64, n: self.n() })
        }
    }

    /// The spanning subgraph with edge set `edges`, keeping labels.
    pub fn restrict_to(&self, edges: &EdgeSet) -> Result<Graph> {
        edges.check_subgraph_of(self)?;
        Ok(Self::assemble(self.n(), &edges.edges, self.labels.clone()))
    }

    /// Subgraph induced by `vertices` (any order, duplicates ignored), relabeled
    /// to `0..k` in ascending id order.
    pub fn induced(&self, vertices: &[Vertex]) -> Subgraph {
        let mut to_parent = vertices.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        let mut edges = Vec::new();
        for (lu, &u) in to_parent.iter().enumerate() {
            for &v in self.neighbors(u) {
                if u < v {
                    if let Ok(lv) = to_parent.binary_search(&v) {
                        edges.push((lu as Vertex, lv as Vertex));
                    }
                }
            }
        }
        edges.sort_unstable();
        let labels = to_parent.iter().map(|&v| self.labels[v as usize]).collect();
        let graph = Self::assemble(to_parent.len(), &edges, labels);
        Subgraph { graph, to_parent }
    }
}

/// An induced subgraph together with its id translation table.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    /// `to_parent[local] = parent id`, ascending.
    pub to_parent: Vec<Vertex>,
}

impl Subgraph {
    pub fn to_local(&self, v: Vertex) -> Option<Vertex> {
        self.to_parent.binary_search(&v).ok().map(|i| i as Vertex)
    }

    pub fn lift(&self, edges: &EdgeSet) -> EdgeSet {
        EdgeSet::from_pairs(
            edges.iter().map(|(u, v)| (self.to_parent[u as usize], self.to_parent[v as usize])),
        )
    }
}

/// A duplicate-free set of undirected edges, stored as sorted (u, v), u < v.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EdgeSet {
    edges: Vec<(Vertex, Vertex)>,
}

impl EdgeSet {
    pub fn new() -> EdgeSet {
        EdgeSet::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Vertex, Vertex)>>(pairs: I) -> EdgeSet {
        let mut edges: Vec<_> = pairs
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        EdgeSet { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn as_slice(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut edges = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            let (a, b) = (self.edges[i], other.edges[j]);
            if a <= b {
                edges.push(a);
                i += 1;
                if a == b {
                    j += 1;
                }
            } else {
                edges.push(b);
                j += 1;
            }
        }
        edges.extend_from_slice(&self.edges[i..]);
        edges.extend_from_slice(&other.edges[j..]);
        EdgeSet { edges }
    }

    pub fn check_subgraph_of(&self, g: &Graph) -> Result<()> {
        match self.edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
            Some(&(u, v)) => Err(SpannerError::NotSubgraph(u, v)),
            None => Ok(()),
        }
    }
}

impl FromIterator<(Vertex, Vertex)> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex)>>(iter: I) -> Self {
        EdgeSet::from_pairs(iter)
    }
}

/// Normalized, duplicate-free list of unordered vertex pairs.
pub fn normalize_pairs(pairs: &[(Vertex, Vertex)]) -> Vec<(Vertex, Vertex)> {
    let mut out: Vec<_> = pairs.iter().map(|&(u, v)| if u <= v { (u, v) } else { (v, u) }).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_is_symmetric_and_sorted() {
        let g = Graph::from_edges(5, &[(0, 3), (3, 1), (1, 0), (4, 2), (0, 3)]).unwrap();
        assert_eq!(g.m(), 4);
        assert_eq!(g.neighbors(0), &[1, 3]);
        assert_eq!(g.neighbors(3), &[0, 1]);
        for u in 0..5 {
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
        }
        assert_eq!(g.volume(0..5), 2 * g.m());
    }

    #[test]
    fn rejects_loops_and_bad_ids() {
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(SpannerError::SelfLoop(1))));
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn induced_subgraph_keeps_labels_and_ranks() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 4)]).unwrap();
        let sub = g.induced(&[4, 1, 2, 3]);
        assert_eq!(sub.to_parent, vec![1, 2, 3, 4]);
        assert_eq!(sub.graph.m(), 4);
        let l1 = sub.to_local(1).unwrap();
        let l4 = sub.to_local(4).unwrap();
        let pos = sub.graph.neighbors(l1).iter().position(|&x| x == l4).unwrap();
        assert_eq!(sub.graph.neighbor_ranks(l1)[pos], edge_rank(1, 4));
        let lifted = sub.lift(&sub.graph.edge_set());
        assert!(lifted.check_subgraph_of(&g).is_ok());
        assert!(lifted.contains(4, 1));
    }

    #[test]
    fn edge_set_union_dedups() {
        let a = EdgeSet::from_pairs([(2, 1), (3, 4)]);
        let b = EdgeSet::from_pairs([(1, 2), (0, 5)]);
        let u = a.union(&b);
        assert_eq!(u.as_slice(), &[(0, 5), (1, 2), (3, 4)]);
    }
}
