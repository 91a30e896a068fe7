//! Spanner results: an edge subset of the host graph, the rule that first
//! added each edge, and a structured build log.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::graph::{EdgeSet, Vertex};

/// Which construction rule contributed an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Edge at a vertex of low degree.
    LowDegree,
    /// Edge joining a heavy vertex to its cluster center.
    ClusterStar,
    /// All edges of a heavy vertex with no sampled neighbor.
    Unclustered,
    /// Shortest path bought for a demand pair.
    BoughtPath,
    /// Shortest path in a distance preserver.
    Preserver,
    /// Cluster-joining or inter-cluster edge of the multiplicative spanner.
    Multiplicative,
    /// BFS tree of an enlarged ball.
    BallTree,
    /// Edge from a recursive build inside a ball.
    BallRecursion,
    /// Preserver between the two boundary layers of a small ball.
    BoundaryPreserver,
    /// Uncovered stretch of a terminal path.
    TerminalPath,
    /// Edge of the subset spanner over the sampled set.
    SampledSubset,
    /// Edge of the input kept by the sparsifier.
    Sparsifier,
    /// Edge of the identity spanner.
    Identity,
}

/// Collects edges, remembering the first rule that added each.
#[derive(Clone, Debug, Default)]
pub struct EdgeCollector {
    tags: HashMap<u64, Rule>,
}

fn key(u: Vertex, v: Vertex) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a as u64) << 32 | b as u64
}

impl EdgeCollector {
    pub fn new() -> EdgeCollector {
        EdgeCollector::default()
    }

    /// Returns true when the edge is new.
    pub fn add(&mut self, u: Vertex, v: Vertex, rule: Rule) -> bool {
        if u == v {
            return false;
        }
        let mut fresh = false;
        self.tags.entry(key(u, v)).or_insert_with(|| {
            fresh = true;
            rule
        });
        fresh
    }

    pub fn extend<I: IntoIterator<Item = (Vertex, Vertex)>>(&mut self, edges: I, rule: Rule) -> usize {
        edges.into_iter().filter(|&(u, v)| self.add(u, v, rule)).count()
    }

    /// Adds a lifted sub-result, keeping the sub-result's own tags.
    pub fn absorb(&mut self, edges: &EdgeSet, tags: &[Rule], map: impl Fn(Vertex) -> Vertex) {
        for ((u, v), &rule) in edges.iter().zip(tags) {
            self.add(map(u), map(v), rule);
        }
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.tags.contains_key(&key(u, v))
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn finish(self) -> (EdgeSet, Vec<Rule>) {
        let mut all: Vec<((Vertex, Vertex), Rule)> = self
            .tags
            .into_iter()
            .map(|(k, r)| (((k >> 32) as Vertex, k as u32), r))
            .collect();
        all.sort_unstable();
        let edges = EdgeSet::from_pairs(all.iter().map(|e| e.0));
        (edges, all.into_iter().map(|e| e.1).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpannerResult<L> {
    pub edges: EdgeSet,
    /// Aligned with `edges`.
    pub provenance: Vec<Rule>,
    pub log: L,
}

impl<L> SpannerResult<L> {
    pub fn from_collector(collector: EdgeCollector, log: L) -> SpannerResult<L> {
        let (edges, provenance) = collector.finish();
        SpannerResult { edges, provenance, log }
    }

    pub fn provenance_counts(&self) -> BTreeMap<Rule, usize> {
        let mut out = BTreeMap::new();
        for &r in &self.provenance {
            *out.entry(r).or_insert(0) += 1;
        }
        out
    }

    pub fn map_log<M>(self, f: impl FnOnce(L) -> M) -> SpannerResult<M> {
        SpannerResult { edges: self.edges, provenance: self.provenance, log: f(self.log) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rule_wins_and_output_is_sorted() {
        let mut c = EdgeCollector::new();
        assert!(c.add(3, 1, Rule::BallTree));
        assert!(!c.add(1, 3, Rule::BoughtPath));
        assert!(c.add(0, 2, Rule::BoughtPath));
        assert!(!c.add(2, 2, Rule::BoughtPath));
        let r = SpannerResult::from_collector(c, ());
        assert_eq!(r.edges.as_slice(), &[(0, 2), (1, 3)]);
        assert_eq!(r.provenance, vec![Rule::BoughtPath, Rule::BallTree]);
    }
}
