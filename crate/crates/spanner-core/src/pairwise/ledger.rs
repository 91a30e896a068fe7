//! Tight pairs of same-level ball centers and their potentials.
//!
//! Centers a, b are tight when dist_H(a,b) ≤ dist_G(a,b) + slack. H only
//! gains edges, so tightness is monotone and only non-tight pairs are ever
//! rechecked. When the slack is at least n, any finite H-distance qualifies and
//! tightness reduces to H-connectivity, which is tracked with component labels.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::bfs::{components, distances_from, DynamicGraph};
use crate::graph::{Graph, Vertex, UNREACHABLE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TightnessMode {
    /// Slack ≥ n: tight iff connected in H (or disconnected in G).
    Connectivity,
    /// Explicit distance comparison per pair.
    Distances,
}

#[derive(Clone, Debug)]
enum State {
    Connectivity { g_comp: Vec<u32>, h_comp: Vec<u32> },
    /// Non-tight pairs (a < b, ball ids) with dist_G between their centers.
    Distances { non_tight: BTreeMap<(usize, usize), u32> },
}

#[derive(Clone, Debug)]
pub struct TightnessLedger {
    slack: f64,
    centers: Vec<Vertex>,
    /// Level of every ball; 0 is excluded from the ledger.
    level: Vec<usize>,
    by_level: Vec<Vec<usize>>,
    state: State,
    potentials: Vec<usize>,
}

impl TightnessLedger {
    pub fn new(
        g: &Graph,
        h: &DynamicGraph,
        centers: Vec<Vertex>,
        level: Vec<usize>,
        max_level: usize,
        slack: f64,
    ) -> TightnessLedger {
        let mut by_level = vec![Vec::new(); max_level + 1];
        for (b, &l) in level.iter().enumerate() {
            if l >= 1 {
                by_level[l].push(b);
            }
        }
        let state = if slack >= g.n() as f64 {
            State::Connectivity { g_comp: components(g), h_comp: components(h) }
        } else {
            let mut non_tight = BTreeMap::new();
            for group in &by_level {
                for (x, &a) in group.iter().enumerate() {
                    if x + 1 == group.len() {
                        break;
                    }
                    let dg = distances_from(g, centers[a]);
                    let dh = distances_from(h, centers[a]);
                    for &b in &group[x + 1..] {
                        let (g_ab, h_ab) = (dg[centers[b] as usize], dh[centers[b] as usize]);
                        if !within(g_ab, h_ab, slack) {
                            non_tight.insert((a.min(b), a.max(b)), g_ab);
                        }
                    }
                }
            }
            State::Distances { non_tight }
        };
        let mut ledger = TightnessLedger { slack, centers, level, by_level, state, potentials: Vec::new() };
        ledger.potentials = ledger.count_potentials();
        ledger
    }

    pub fn mode(&self) -> TightnessMode {
        match self.state {
            State::Connectivity { .. } => TightnessMode::Connectivity,
            State::Distances { .. } => TightnessMode::Distances,
        }
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn level(&self, ball: usize) -> usize {
        self.level[ball]
    }

    pub fn is_tight(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        match &self.state {
            State::Connectivity { g_comp, h_comp } => {
                let (ca, cb) = (self.centers[a] as usize, self.centers[b] as usize);
                g_comp[ca] != g_comp[cb] || h_comp[ca] == h_comp[cb]
            }
            State::Distances { non_tight } => !non_tight.contains_key(&(a.min(b), a.max(b))),
        }
    }

    /// Φ_L for L = 0..=max_level (entry 0 is always 0).
    pub fn potentials(&self) -> &[usize] {
        &self.potentials
    }

    /// Re-evaluates the non-tight pairs against the grown H.
    pub fn refresh(&mut self, h: &DynamicGraph) {
        match &mut self.state {
            State::Connectivity { h_comp, .. } => *h_comp = components(h),
            State::Distances { non_tight } => {
                let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &(a, b) in non_tight.keys() {
                    by_source.entry(a).or_default().push(b);
                }
                for (a, targets) in by_source {
                    let dh = distances_from(h, self.centers[a]);
                    for b in targets {
                        let g_ab = non_tight[&(a, b)];
                        if within(g_ab, dh[self.centers[b] as usize], self.slack) {
                            non_tight.remove(&(a, b));
                        }
                    }
                }
            }
        }
        self.potentials = self.count_potentials();
    }

    fn count_potentials(&self) -> Vec<usize> {
        let mut out = vec![0; self.by_level.len()];
        match &self.state {
            State::Connectivity { g_comp, h_comp } => {
                for (l, group) in self.by_level.iter().enumerate() {
                    let mut g_groups: BTreeMap<u32, usize> = BTreeMap::new();
                    let mut h_groups: BTreeMap<u32, usize> = BTreeMap::new();
                    for &b in group {
                        let c = self.centers[b] as usize;
                        *g_groups.entry(g_comp[c]).or_insert(0) += 1;
                        *h_groups.entry(h_comp[c]).or_insert(0) += 1;
                    }
                    let pairs = |m: &BTreeMap<u32, usize>| m.values().map(|&x| x * (x - 1) / 2).sum::<usize>();
                    out[l] = pairs(&g_groups) - pairs(&h_groups);
                }
            }
            State::Distances { non_tight } => {
                for &(a, _) in non_tight.keys() {
                    out[self.level[a]] += 1;
                }
            }
        }
        out
    }
}

fn within(g_ab: u32, h_ab: u32, slack: f64) -> bool {
    g_ab == UNREACHABLE || (h_ab != UNREACHABLE && h_ab as f64 <= g_ab as f64 + slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{gen_graph, GraphKind};

    fn cycle_ledger(slack: f64) -> (Graph, DynamicGraph, TightnessLedger) {
        let g = gen_graph(&GraphKind::Cycle { n: 12 }, 0).unwrap();
        let mut h = DynamicGraph::new(12);
        // The path 0-1-…-11 without the closing edge.
        for v in 0..11 {
            h.add_edge(v, v + 1);
        }
        let ledger = TightnessLedger::new(&g, &h, vec![0, 11, 5], vec![1, 1, 0], 2, slack);
        (g, h, ledger)
    }

    #[test]
    fn distance_mode_tracks_slack() {
        let (_, mut h, mut ledger) = cycle_ledger(3.0);
        assert_eq!(ledger.mode(), TightnessMode::Distances);
        assert!(ledger.is_tight(0, 0));
        // dist_H(0, 11) = 11, dist_G = 1.
        assert!(!ledger.is_tight(0, 1));
        assert_eq!(ledger.potentials(), &[0, 1, 0]);
        h.add_edge(11, 0);
        ledger.refresh(&h);
        assert!(ledger.is_tight(1, 0));
        assert_eq!(ledger.potentials(), &[0, 0, 0]);
    }

    #[test]
    fn large_slack_uses_connectivity() {
        let (_, _, ledger) = cycle_ledger(100.0);
        assert_eq!(ledger.mode(), TightnessMode::Connectivity);
        assert!(ledger.is_tight(0, 1));
        assert_eq!(ledger.potentials(), &[0, 0, 0]);
        let g = gen_graph(&GraphKind::Path { n: 6 }, 0).unwrap();
        let mut h = DynamicGraph::new(6);
        let mut l = TightnessLedger::new(&g, &h, vec![0, 5, 2], vec![2, 2, 2], 2, 1e9);
        assert_eq!(l.potentials(), &[0, 0, 3]);
        for v in 0..5 {
            h.add_edge(v, v + 1);
        }
        l.refresh(&h);
        assert_eq!(l.potentials(), &[0, 0, 0]);
    }
}
