//! Ball clustering with bounded radius growth, and its auditor.
//!
//! Repeatedly take the lowest-id uncovered vertex c and grow r from R by
//! factors of 4 until both |B(c,4r)| and vol(B(c,4r)) are within a factor
//! n^eps of the same quantities at radius r/2; then B(c,r) joins the
//! clustering. Each ball costs O(vol(B(c,4r))) work.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::bfs::{extend_layers, layers_with, Layers, Scratch};
use crate::graph::{Graph, Vertex};
use crate::par::*;

#[derive(Clone, Debug, Serialize)]
pub struct ClusterBall {
    pub center: Vertex,
    pub radius: usize,
    /// B(c, r), sorted.
    pub members: Vec<Vertex>,
    pub half_size: usize,
    pub half_volume: usize,
    pub outer_size: usize,
    pub outer_volume: usize,
    /// Number of times the radius was multiplied by 4.
    pub growth_steps: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Clustering {
    pub base_radius: usize,
    pub eps: f64,
    pub n: usize,
    pub m: usize,
    pub balls: Vec<ClusterBall>,
}

/// Smallest integer ≥ n^eps · x, with near-integer products snapped so that
/// rounding noise in the power never moves the threshold.
pub fn growth_threshold(n: usize, eps: f64, x: usize) -> u64 {
    let v = (eps * (n.max(1) as f64).ln()).exp() * x as f64;
    if !v.is_finite() || v >= u64::MAX as f64 {
        return u64::MAX;
    }
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.max(1.0) {
        r as u64
    } else {
        v.ceil() as u64
    }
}

impl Clustering {
    /// R · 2^{10/eps}, saturating in floating point.
    pub fn radius_cap(&self) -> f64 {
        self.base_radius as f64 * (10.0 / self.eps).exp2()
    }

    /// Most balls any vertex may be captured by (at half radius).
    pub fn capture_bound(&self) -> f64 {
        (5.0 / self.eps).max(1.0)
    }

    pub fn min_radius(&self) -> usize {
        self.balls.iter().map(|b| b.radius).min().unwrap_or(self.base_radius)
    }

    /// For every vertex, the lowest index of a ball containing it.
    pub fn first_host(&self) -> Vec<u32> {
        let mut host = vec![u32::MAX; self.n];
        for (i, b) in self.balls.iter().enumerate().rev() {
            for &v in &b.members {
                host[v as usize] = i as u32;
            }
        }
        host
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n || g.m() != self.m {
            return invalid(format!(
                "clustering built for n={}, m={} but graph has n={}, m={}",
                self.n,
                self.m,
                g.n(),
                g.m()
            ));
        }
        Ok(())
    }
}

pub fn build_clustering(g: &Graph, base_radius: usize, eps: f64) -> Result<Clustering> {
    if base_radius < 1 {
        return invalid("base radius must be at least 1");
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return invalid("eps must be positive");
    }
    let n = g.n();
    let mut covered = vec![false; n];
    let mut scratch = Scratch::new(n);
    let mut balls = Vec::new();
    let mut next = 0usize;
    loop {
        while next < n && covered[next] {
            next += 1;
        }
        if next == n {
            break;
        }
        let c = next as Vertex;
        let mut r = base_radius;
        let mut steps = 0;
        let mut layers = layers_with(g, c, 4 * r, &mut scratch);
        let (half_size, half_volume, outer_size, outer_volume) = loop {
            extend_layers(g, &mut layers, 4 * r, &mut scratch);
            let stats = growth_stats(g, &layers, r);
            let (hs, hv, os, ov) = stats;
            if os as u64 <= growth_threshold(n, eps, hs) && ov as u64 <= growth_threshold(n, eps, hv) {
                break stats;
            }
            r = r.saturating_mul(4);
            steps += 1;
        };
        let mut members = layers.within(r).to_vec();
        members.sort_unstable();
        for &v in &members {
            covered[v as usize] = true;
        }
        balls.push(ClusterBall {
            center: c,
            radius: r,
            members,
            half_size,
            half_volume,
            outer_size,
            outer_volume,
            growth_steps: steps,
        });
    }
    Ok(Clustering { base_radius, eps, n, m: g.m(), balls })
}

/// (|B(c,r/2)|, vol B(c,r/2), |B(c,4r)|, vol B(c,4r)) from a search that
/// reaches depth 4r.
fn growth_stats(g: &Graph, layers: &Layers, r: usize) -> (usize, usize, usize, usize) {
    let half = layers.within(r / 2);
    let outer = layers.within(r.saturating_mul(4));
    (half.len(), g.volume(half.iter().copied()), outer.len(), g.volume(outer.iter().copied()))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClusteringAudit {
    pub balls: usize,
    pub uncovered: Vec<Vertex>,
    pub radius_violations: Vec<usize>,
    pub growth_violations: Vec<usize>,
    /// Reported statistics that disagree with a fresh recomputation.
    pub stat_mismatches: Vec<usize>,
    pub max_capture: usize,
    pub capture_bound: f64,
    pub capture_violations: usize,
    /// (earlier ball, later ball) pairs whose half-balls meet without the
    /// earlier radius being at most a quarter of the later one.
    pub separation_violations: Vec<(usize, usize)>,
    pub sum_half_sizes: usize,
    pub sum_outer_sizes: usize,
    pub sum_outer_volumes: usize,
    /// Σ|B(c,r/2)| / (n/eps).
    pub half_size_constant: f64,
    /// Σ|B(c,4r)| / (n^{1+eps}/eps).
    pub outer_size_constant: f64,
    /// Σvol(B(c,4r)) / (m n^eps / eps).
    pub outer_volume_constant: f64,
    pub max_radius: usize,
    pub max_growth_steps: u32,
}

impl ClusteringAudit {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty()
            && self.radius_violations.is_empty()
            && self.growth_violations.is_empty()
            && self.stat_mismatches.is_empty()
            && self.capture_violations == 0
            && self.separation_violations.is_empty()
    }
}

/// Recomputes every ball from scratch and checks coverage, the radius window,
/// the growth conditions, the capture bound and the separation of balls in
/// construction order.
pub fn audit_clustering(g: &Graph, cl: &Clustering) -> Result<ClusteringAudit> {
    cl.check_graph(g)?;
    let n = g.n();
    let fresh: Vec<(Vec<Vertex>, Vec<Vertex>, (usize, usize, usize, usize))> = cl
        .balls
        .par_iter()
        .map(|b| {
            let mut scratch = Scratch::new(n);
            let l = layers_with(g, b.center, b.radius.saturating_mul(4), &mut scratch);
            let stats = growth_stats(g, &l, b.radius);
            (l.within(b.radius).to_vec(), l.within(b.radius / 2).to_vec(), stats)
        })
        .collect();

    let mut audit = ClusteringAudit {
        balls: cl.balls.len(),
        capture_bound: cl.capture_bound(),
        ..Default::default()
    };
    let mut covered = vec![false; n];
    let mut captured_by: Vec<Vec<u32>> = vec![Vec::new(); n];
    let cap = cl.radius_cap();
    for (i, (b, (within, half, stats))) in cl.balls.iter().zip(&fresh).enumerate() {
        for &v in within {
            covered[v as usize] = true;
        }
        for &v in half {
            captured_by[v as usize].push(i as u32);
        }
        if b.radius < cl.base_radius || b.radius as f64 > cap {
            audit.radius_violations.push(i);
        }
        let (hs, hv, os, ov) = *stats;
        if os as u64 > growth_threshold(n, cl.eps, hs) || ov as u64 > growth_threshold(n, cl.eps, hv) {
            audit.growth_violations.push(i);
        }
        if (hs, hv, os, ov) != (b.half_size, b.half_volume, b.outer_size, b.outer_volume) {
            audit.stat_mismatches.push(i);
        }
        audit.sum_half_sizes += hs;
        audit.sum_outer_sizes += os;
        audit.sum_outer_volumes += ov;
        audit.max_radius = audit.max_radius.max(b.radius);
        audit.max_growth_steps = audit.max_growth_steps.max(b.growth_steps);
    }
    audit.uncovered = (0..n as Vertex).filter(|&v| !covered[v as usize]).collect();
    for list in &captured_by {
        audit.max_capture = audit.max_capture.max(list.len());
        if list.len() as f64 > audit.capture_bound {
            audit.capture_violations += 1;
        }
        for (x, &a) in list.iter().enumerate() {
            for &b in &list[x + 1..] {
                let (ra, rb) = (cl.balls[a as usize].radius, cl.balls[b as usize].radius);
                if ra.saturating_mul(4) > rb {
                    audit.separation_violations.push((a as usize, b as usize));
                }
            }
        }
    }
    audit.separation_violations.sort_unstable();
    audit.separation_violations.dedup();
    let nf = n.max(1) as f64;
    let beta = nf.powf(cl.eps);
    audit.half_size_constant = audit.sum_half_sizes as f64 / (nf / cl.eps);
    audit.outer_size_constant = audit.sum_outer_sizes as f64 / (nf * beta / cl.eps);
    audit.outer_volume_constant =
        audit.sum_outer_volumes as f64 / ((g.m().max(1)) as f64 * beta / cl.eps);
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{gen_graph, GraphKind};

    #[test]
    fn single_vertex() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let cl = build_clustering(&g, 1, 0.5).unwrap();
        assert_eq!(cl.balls.len(), 1);
        assert_eq!(cl.balls[0].radius, 1);
        assert!(audit_clustering(&g, &cl).unwrap().passed());
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(build_clustering(&g, 0, 0.5).is_err());
        assert!(build_clustering(&g, 1, 0.0).is_err());
    }

    #[test]
    fn thresholds_snap_exact_powers() {
        assert_eq!(growth_threshold(16, 0.5, 3), 12);
        assert_eq!(growth_threshold(10, 0.5, 1), 4);
        assert_eq!(growth_threshold(1 << 20, 0.25, 7), 224);
    }

    #[test]
    fn deleting_a_sole_cover_fails_coverage() {
        let g = gen_graph(&GraphKind::Path { n: 60 }, 0).unwrap();
        let mut cl = build_clustering(&g, 2, 0.5).unwrap();
        assert!(cl.balls.len() > 1);
        let last = cl.balls.pop().unwrap();
        let audit = audit_clustering(&g, &cl).unwrap();
        assert!(!audit.passed());
        assert!(audit.uncovered.contains(&last.center));
    }

    #[test]
    fn mismatched_graph_is_rejected() {
        let g = gen_graph(&GraphKind::Path { n: 10 }, 0).unwrap();
        let h = gen_graph(&GraphKind::Path { n: 11 }, 0).unwrap();
        let cl = build_clustering(&g, 1, 0.5).unwrap();
        assert!(audit_clustering(&h, &cl).is_err());
    }
}
