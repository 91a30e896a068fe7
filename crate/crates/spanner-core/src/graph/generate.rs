//! Seeded graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, Vertex};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    /// Uniform over graphs with exactly `m` edges.
    Gnm { n: usize, m: usize },
    /// Points uniform in the unit square joined when closer than the radius
    /// giving the requested expected degree.
    Geometric { n: usize, avg_degree: f64 },
    /// Uniform random recursive tree.
    Tree { n: usize },
    /// Circulant graph joining each vertex to the next `k` around a cycle.
    Ring { n: usize, k: usize },
    Star { n: usize },
    Complete { n: usize },
}

/// `count` uniform pairs with distinct endpoints, normalized to u < v and
/// deduplicated.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vertex, Vertex)> {
    if n < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vertex, Vertex)> = (0..count)
        .map(|_| {
            let s = rng.gen_range(0..n as Vertex);
            let mut t = rng.gen_range(0..n as Vertex - 1);
            if t >= s {
                t += 1;
            }
            (s, t)
        })
        .collect();
    super::normalize_pairs(&pairs)
}

pub fn gen_graph(kind: &GraphKind, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, edges): (usize, Vec<(Vertex, Vertex)>) = match *kind {
        GraphKind::Path { n } => (n, (1..n as Vertex).map(|i| (i - 1, i)).collect()),
        GraphKind::Cycle { n } => {
            if n < 3 {
                return invalid("a cycle needs at least 3 vertices");
            }
            let mut e: Vec<_> = (1..n as Vertex).map(|i| (i - 1, i)).collect();
            e.push((0, n as Vertex - 1));
            (n, e)
        }
        GraphKind::Grid { rows, cols } => {
            let id = |r: usize, c: usize| (r * cols + c) as Vertex;
            let mut e = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        e.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        e.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            (rows * cols, e)
        }
        GraphKind::Gnm { n, m } => (n, gnm_edges(n, m, &mut rng)?),
        GraphKind::Geometric { n, avg_degree } => {
            if !(avg_degree >= 0.0) {
                return invalid("average degree must be nonnegative");
            }
            (n, geometric_edges(n, avg_degree, &mut rng))
        }
        GraphKind::Tree { n } => {
            let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
            perm.shuffle(&mut rng);
            let e = (1..n).map(|i| (perm[rng.gen_range(0..i)], perm[i])).collect();
            (n, e)
        }
        GraphKind::Ring { n, k } => {
            if 2 * k >= n {
                return invalid("ring needs n > 2k");
            }
            let mut e = Vec::new();
            for i in 0..n {
                for j in 1..=k {
                    e.push((i as Vertex, ((i + j) % n) as Vertex));
                }
            }
            (n, e)
        }
        GraphKind::Star { n } => (n, (1..n as Vertex).map(|i| (0, i)).collect()),
        GraphKind::Complete { n } => {
            let mut e = Vec::new();
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    e.push((u, v));
                }
            }
            (n, e)
        }
    };
    Graph::from_edges(n, &edges)
}

fn gnm_edges(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(Vertex, Vertex)>> {
    let total = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > total {
        return invalid(format!("m = {m} exceeds n(n-1)/2 = {total}"));
    }
    if m * 3 > total {
        let mut all = Vec::with_capacity(total);
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                all.push((u, v));
            }
        }
        let (chosen, _) = all.partial_shuffle(rng, m);
        let mut out = chosen.to_vec();
        out.sort_unstable();
        return Ok(out);
    }
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let u = rng.gen_range(0..n as Vertex);
        let v = rng.gen_range(0..n as Vertex);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            out.push(e);
        }
    }
    Ok(out)
}

fn geometric_edges(n: usize, avg_degree: f64, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    if n < 2 {
        return Vec::new();
    }
    let radius = (avg_degree / (std::f64::consts::PI * (n - 1) as f64)).sqrt().min(1.5);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let cells = ((1.0 / radius.max(1e-9)).floor() as usize).clamp(1, 4096);
    let cell_of = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
    let mut buckets = vec![Vec::new(); cells * cells];
    for (i, &(x, y)) in pts.iter().enumerate() {
        buckets[cell_of(x) * cells + cell_of(y)].push(i);
    }
    let r2 = radius * radius;
    let mut out = Vec::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (cx, cy) = (cell_of(x), cell_of(y));
        for gx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
            for gy in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
                for &j in &buckets[gx * cells + gy] {
                    if j > i {
                        let (dx, dy) = (pts[j].0 - x, pts[j].1 - y);
                        if dx * dx + dy * dy <= r2 {
                            out.push((i as Vertex, j as Vertex));
                        }
                    }
                }
            }
        }
    }
    out
}
