//! Chopping a shortest path into segments hosted by clustering balls.
//!
//! From the current start s_i take the lowest-index ball containing it and let
//! t_i be the last path vertex within 2r_i of that ball's center; continue from
//! t_i until the path ends.

use std::sync::OnceLock;

use serde::Serialize;

use crate::clustering::Clustering;
use crate::error::{invalid, Result, SpannerError};
use crate::graph::bfs::{check_simple_path, layers_with, Scratch};
use crate::graph::{Graph, Vertex};

/// Per-ball distance tables out to 4r, computed on first use.
pub struct BallDistances<'a> {
    g: &'a Graph,
    cl: &'a Clustering,
    host: Vec<u32>,
    tables: Vec<OnceLock<Vec<(Vertex, u32)>>>,
}

impl<'a> BallDistances<'a> {
    pub fn new(g: &'a Graph, cl: &'a Clustering) -> Result<BallDistances<'a>> {
        cl.check_graph(g)?;
        let host = cl.first_host();
        if let Some(v) = host.iter().position(|&h| h == u32::MAX) {
            return Err(SpannerError::Uncovered(v as Vertex));
        }
        let tables = (0..cl.balls.len()).map(|_| OnceLock::new()).collect();
        Ok(BallDistances { g, cl, host, tables })
    }

    pub fn clustering(&self) -> &Clustering {
        self.cl
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    /// Lowest index of a ball containing `v`.
    pub fn host(&self, v: Vertex) -> usize {
        self.host[v as usize] as usize
    }

    /// (vertex, distance) for B(c, 4r), sorted by vertex.
    pub fn table(&self, ball: usize) -> &[(Vertex, u32)] {
        self.tables[ball].get_or_init(|| {
            let b = &self.cl.balls[ball];
            let mut scratch = Scratch::new(self.g.n());
            let l = layers_with(self.g, b.center, b.radius.saturating_mul(4), &mut scratch);
            let mut out = Vec::with_capacity(l.size_within(b.radius.saturating_mul(4)));
            for d in 0..=l.depth().min(b.radius.saturating_mul(4)) {
                out.extend(l.layer(d).iter().map(|&v| (v, d as u32)));
            }
            out.sort_unstable();
            out
        })
    }

    /// Distance from the ball's center, if at most 4r.
    pub fn dist(&self, ball: usize, v: Vertex) -> Option<u32> {
        let t = self.table(ball);
        t.binary_search_by_key(&v, |e| e.0).ok().map(|i| t[i].1)
    }

    /// B(c, 4r) as sorted vertex ids.
    pub fn outer_members(&self, ball: usize) -> Vec<Vertex> {
        self.table(ball).iter().map(|e| e.0).collect()
    }

    pub fn within(&self, ball: usize, v: Vertex, factor: usize) -> bool {
        let r = self.cl.balls[ball].radius.saturating_mul(factor);
        self.dist(ball, v).is_some_and(|d| d as usize <= r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// Index into the path of s_i.
    pub start: usize,
    /// Index into the path of t_i.
    pub end: usize,
    pub ball: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathPartition {
    pub segments: Vec<Segment>,
}

impl PathPartition {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Partition without validating the path; `path` must be a shortest path.
pub fn partition_unchecked(path: &[Vertex], balls: &BallDistances) -> PathPartition {
    let mut segments = Vec::new();
    let mut start = 0;
    loop {
        let ball = balls.host(path[start]);
        let mut end = start;
        for j in (start..path.len()).rev() {
            if balls.within(ball, path[j], 2) {
                end = j;
                break;
            }
        }
        segments.push(Segment { start, end, ball });
        if end + 1 >= path.len() {
            break;
        }
        // The vertex after s_i is within r_i + 1 ≤ 2r_i, so this advances.
        debug_assert!(end > start);
        start = end;
    }
    PathPartition { segments }
}

pub fn path_partition(g: &Graph, path: &[Vertex], balls: &BallDistances) -> Result<PathPartition> {
    check_simple_path(g, path)?;
    if !std::ptr::eq(g, balls.graph()) {
        balls.clustering().check_graph(g)?;
    }
    let (s, t) = (path[0], *path.last().unwrap());
    let d = crate::graph::bfs::bfs_distances(g, s)?[t as usize];
    if d as usize != path.len() - 1 {
        return invalid("path is not a shortest path");
    }
    Ok(partition_unchecked(path, balls))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PartitionCheck {
    pub distinct_hosts: bool,
    pub endpoints_chained: bool,
    pub starts_in_ball: bool,
    pub ends_in_double_ball: bool,
    pub contained_in_quadruple_ball: bool,
    pub length_bound: bool,
    pub interior_lengths: bool,
}

impl PartitionCheck {
    pub fn passed(&self) -> bool {
        self.distinct_hosts
            && self.endpoints_chained
            && self.starts_in_ball
            && self.ends_in_double_ball
            && self.contained_in_quadruple_ball
            && self.length_bound
            && self.interior_lengths
    }
}

/// Checks every structural guarantee of a partition directly.
pub fn check_partition(path: &[Vertex], p: &PathPartition, balls: &BallDistances) -> PartitionCheck {
    let segs = &p.segments;
    let mut hosts: Vec<usize> = segs.iter().map(|s| s.ball).collect();
    hosts.sort_unstable();
    let distinct_hosts = hosts.windows(2).all(|w| w[0] != w[1]);
    let endpoints_chained = !segs.is_empty()
        && segs[0].start == 0
        && segs.last().unwrap().end == path.len() - 1
        && segs.windows(2).all(|w| w[0].end == w[1].start);
    let starts_in_ball = segs.iter().all(|s| balls.within(s.ball, path[s.start], 1));
    let ends_in_double_ball = segs.iter().all(|s| balls.within(s.ball, path[s.end], 2));
    let contained_in_quadruple_ball = segs
        .iter()
        .all(|s| path[s.start..=s.end].iter().all(|&v| balls.within(s.ball, v, 4)));
    let min_radius = balls.clustering().min_radius();
    let edges = path.len() - 1;
    let length_bound = segs.len() as f64 <= edges as f64 / min_radius as f64 + 1.0;
    let interior_lengths = segs[..segs.len().saturating_sub(1)]
        .iter()
        .all(|s| s.end - s.start >= balls.clustering().balls[s.ball].radius);
    PartitionCheck {
        distinct_hosts,
        endpoints_chained,
        starts_in_ball,
        ends_in_double_ball,
        contained_in_quadruple_ball,
        length_bound,
        interior_lengths,
    }
}
