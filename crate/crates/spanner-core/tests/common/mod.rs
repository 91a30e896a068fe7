//! Reference oracles written against plain adjacency lists, independent of the
//! library's own search code.

#![allow(dead_code)]

use std::collections::VecDeque;

use spanner_core::graph::generate::{gen_graph, GraphKind};
use spanner_core::graph::{EdgeSet, Graph, Vertex};

pub const INF: u32 = u32::MAX;

pub fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    gen_graph(&GraphKind::Gnm { n, m }, seed).unwrap()
}

pub fn kind(k: GraphKind) -> Graph {
    gen_graph(&k, 0).unwrap()
}

pub fn adjacency(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        adj[u as usize].push(v as usize);
        adj[v as usize].push(u as usize);
    }
    adj
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![INF; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == INF {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// All-pairs distances by Floyd–Warshall.
pub fn floyd_warshall(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Vec<Vec<u32>> {
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (u, v) in edges {
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let dkj = d[k][j];
                if dkj != INF && dik + dkj < d[i][j] {
                    d[i][j] = dik + dkj;
                }
            }
        }
    }
    d
}

/// (dist_G, dist_H) for each pair, by BFS in both graphs.
pub fn pair_distances(g: &Graph, h: &EdgeSet, pairs: &[(Vertex, Vertex)]) -> Vec<(u32, u32)> {
    let ag = adjacency(g.n(), g.edges());
    let ah = adjacency(g.n(), h.iter());
    pairs
        .iter()
        .map(|&(s, t)| (bfs(&ag, s as usize)[t as usize], bfs(&ah, s as usize)[t as usize]))
        .collect()
}

/// Largest dist_H − dist_G over the pairs; None if some pair connected in G
/// is disconnected in H.
pub fn max_error(g: &Graph, h: &EdgeSet, pairs: &[(Vertex, Vertex)]) -> Option<u32> {
    let mut worst = 0;
    for (dg, dh) in pair_distances(g, h, pairs) {
        if dg == INF {
            continue;
        }
        if dh == INF {
            return None;
        }
        assert!(dh >= dg, "spanner shortcut: {dh} < {dg}");
        worst = worst.max(dh - dg);
    }
    Some(worst)
}

/// Largest error over every pair, through Floyd–Warshall on both graphs.
pub fn all_pairs_max_error(g: &Graph, h: &EdgeSet) -> Option<u32> {
    let n = g.n();
    let dg = floyd_warshall(n, g.edges());
    let dh = floyd_warshall(n, h.iter());
    let mut worst = 0;
    for i in 0..n {
        for j in i + 1..n {
            if dg[i][j] == INF {
                continue;
            }
            if dh[i][j] == INF {
                return None;
            }
            worst = worst.max(dh[i][j] - dg[i][j]);
        }
    }
    Some(worst)
}

pub fn is_subgraph(g: &Graph, h: &EdgeSet) -> bool {
    h.iter().all(|(u, v)| g.has_edge(u, v))
}

/// Every pair of paths meets in a contiguous stretch of each.
pub fn intersections_contiguous(paths: &[&Vec<Vertex>]) -> bool {
    let contiguous = |a: &[Vertex], b: &[Vertex]| {
        let idx: Vec<usize> = a.iter().enumerate().filter(|(_, v)| b.contains(v)).map(|(i, _)| i).collect();
        idx.windows(2).all(|w| w[1] == w[0] + 1)
    };
    for (i, a) in paths.iter().enumerate() {
        for b in &paths[i + 1..] {
            if !contiguous(a, b) || !contiguous(b, a) {
                return false;
            }
        }
    }
    true
}

pub fn all_pairs(vs: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    vs.iter().enumerate().flat_map(|(i, &u)| vs[i + 1..].iter().map(move |&v| (u, v))).collect()
}
