//! Exact stretch measurement, slope fitting and report serialization.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write;

use serde::Serialize;

use crate::classes::class_of;
use crate::error::{invalid, Result};
use crate::graph::bfs::bfs_distances;
use crate::graph::generate::random_pairs;
use crate::graph::{normalize_pairs, EdgeSet, Graph, Vertex, UNREACHABLE};
use crate::par::*;

/// Largest n for which every pair may be measured.
pub const ALL_PAIRS_LIMIT: usize = 2048;
/// Per-pair rows are kept up to this many pairs.
pub const ROW_LIMIT: usize = 200_000;
/// Pairs re-measured with bidirectional search.
pub const CROSS_CHECKS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum PairSelection {
    All,
    Pairs { pairs: Vec<(Vertex, Vertex)> },
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairError {
    pub s: Vertex,
    pub t: Vertex,
    pub dist_g: u32,
    /// None when t is unreachable from s in H.
    pub dist_h: Option<u32>,
}

impl PairError {
    /// None for an infinite error.
    pub fn error(&self) -> Option<u32> {
        self.dist_h.map(|h| h - self.dist_g)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StretchReport {
    pub selection: String,
    pub pairs: usize,
    /// Pairs disconnected in G (ignored).
    pub disconnected_in_g: usize,
    /// Pairs connected in G but not in H.
    pub infinite: usize,
    pub max_error: u32,
    pub mean_error: f64,
    /// Distance class D → max finite error among pairs with D ≤ dist < 2D.
    pub class_max_error: BTreeMap<usize, u32>,
    /// Pairs with dist_H < dist_G, which a subgraph can never produce.
    pub shortcuts: usize,
    pub cross_checked: usize,
    pub cross_check_mismatches: usize,
    pub rows_truncated: bool,
    pub rows: Vec<PairError>,
}

impl StretchReport {
    /// Every pair connected in G stays connected in H.
    pub fn finite(&self) -> bool {
        self.infinite == 0
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "s,t,dist_g,dist_h,error")?;
        for r in &self.rows {
            match r.dist_h {
                Some(h) => writeln!(out, "{},{},{},{},{}", r.s, r.t, r.dist_g, h, h - r.dist_g)?,
                None => writeln!(out, "{},{},{},inf,inf", r.s, r.t, r.dist_g)?,
            }
        }
        Ok(())
    }
}

fn select_pairs(n: usize, sel: &PairSelection) -> Result<Vec<(Vertex, Vertex)>> {
    match sel {
        PairSelection::All => {
            if n > ALL_PAIRS_LIMIT {
                return invalid(format!("all-pairs measurement is limited to n ≤ {ALL_PAIRS_LIMIT}"));
            }
            Ok((0..n as Vertex).flat_map(|s| (s + 1..n as Vertex).map(move |t| (s, t))).collect())
        }
        PairSelection::Pairs { pairs } => {
            for &(u, v) in pairs {
                if u as usize >= n || v as usize >= n {
                    return invalid(format!("pair ({u}, {v}) out of range for n = {n}"));
                }
            }
            Ok(normalize_pairs(pairs).into_iter().filter(|(u, v)| u != v).collect())
        }
        PairSelection::Sample { count, seed } => Ok(random_pairs(n, *count, *seed)),
    }
}

/// Measures dist_H against dist_G with one BFS per source in each graph.
pub fn stretch_report(g: &Graph, h: &EdgeSet, selection: &PairSelection) -> Result<StretchReport> {
    let hg = g.restrict_to(h)?;
    let pairs = select_pairs(g.n(), selection)?;
    let mut by_source: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(s, t) in &pairs {
        by_source.entry(s).or_default().push(t);
    }
    let groups: Vec<(Vertex, Vec<Vertex>)> = by_source.into_iter().collect();
    let measured: Vec<Vec<PairError>> = groups
        .par_iter()
        .map(|(s, targets)| {
            let dg = bfs_distances(g, *s).unwrap();
            let dh = bfs_distances(&hg, *s).unwrap();
            targets
                .iter()
                .map(|&t| {
                    let x = dh[t as usize];
                    PairError { s: *s, t, dist_g: dg[t as usize], dist_h: (x != UNREACHABLE).then_some(x) }
                })
                .collect()
        })
        .collect();
    let rows: Vec<PairError> = measured.into_iter().flatten().collect();

    let mut report = StretchReport {
        selection: match selection {
            PairSelection::All => "all".to_string(),
            PairSelection::Pairs { .. } => "pairs".to_string(),
            PairSelection::Sample { count, seed } => format!("sample:{count}:{seed}"),
        },
        pairs: rows.len(),
        ..Default::default()
    };
    let mut sum = 0u64;
    let mut counted = 0u64;
    for r in &rows {
        if r.dist_g == UNREACHABLE {
            report.disconnected_in_g += 1;
            continue;
        }
        match r.dist_h {
            None => report.infinite += 1,
            Some(x) if x < r.dist_g => report.shortcuts += 1,
            Some(x) => {
                let e = x - r.dist_g;
                report.max_error = report.max_error.max(e);
                sum += e as u64;
                counted += 1;
                let c = report.class_max_error.entry(class_of(r.dist_g)).or_insert(0);
                *c = (*c).max(e);
            }
        }
    }
    report.mean_error = if counted > 0 { sum as f64 / counted as f64 } else { 0.0 };

    let step = (rows.len() / CROSS_CHECKS).max(1);
    for r in rows.iter().step_by(step).take(CROSS_CHECKS) {
        report.cross_checked += 1;
        let expect = r.dist_h.unwrap_or(UNREACHABLE);
        if bidirectional_distance(&hg, r.s, r.t) != expect {
            report.cross_check_mismatches += 1;
        }
    }
    report.rows_truncated = rows.len() > ROW_LIMIT;
    report.rows = rows;
    report.rows.truncate(ROW_LIMIT);
    Ok(report)
}

/// Hop distance by alternating frontier expansion from both ends.
pub fn bidirectional_distance(g: &Graph, s: Vertex, t: Vertex) -> u32 {
    if s == t {
        return 0;
    }
    let n = g.n();
    let mut dist = [vec![UNREACHABLE; n], vec![UNREACHABLE; n]];
    let mut queue = [VecDeque::from([s]), VecDeque::from([t])];
    dist[0][s as usize] = 0;
    dist[1][t as usize] = 0;
    let mut best = UNREACHABLE;
    let mut radius = [0u32, 0u32];
    while !queue[0].is_empty() && !queue[1].is_empty() {
        if best != UNREACHABLE && radius[0] + radius[1] >= best {
            break;
        }
        let side = if queue[0].len() <= queue[1].len() { 0 } else { 1 };
        let layer = queue[side].len();
        for _ in 0..layer {
            let u = queue[side].pop_front().unwrap();
            let du = dist[side][u as usize];
            for &w in g.neighbors(u) {
                let other = dist[1 - side][w as usize];
                if other != UNREACHABLE {
                    best = best.min(du + 1 + other);
                }
                if dist[side][w as usize] == UNREACHABLE {
                    dist[side][w as usize] = du + 1;
                    queue[side].push_back(w);
                }
            }
        }
        radius[side] += 1;
    }
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    /// (x, y) observations, e.g. (n, |E|).
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

impl SlopeFit {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,y")?;
        for (x, y) in &self.points {
            writeln!(out, "{x},{y}")?;
        }
        writeln!(out, "# slope={},intercept={},residual={}", self.slope, self.intercept, self.residual)?;
        Ok(())
    }
}

/// Least squares of ln y against ln x.
pub fn slope_fit(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 4 {
        return invalid(format!("slope fit needs at least 4 points, got {}", points.len()));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return invalid("x values must be strictly increasing");
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return invalid("slope fit needs positive observations");
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / k).sqrt();
    Ok(SlopeFit { points: points.to_vec(), slope, intercept, residual })
}

/// A measured quantity against an instantiated bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

pub fn check_bound(name: &str, measured: f64, bound: f64) -> BoundCheck {
    BoundCheck { name: name.to_string(), measured, bound, passed: measured <= bound }
}
