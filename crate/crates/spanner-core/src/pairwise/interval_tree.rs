//! Choosing which segments of a long demand path become demand pairs.
//!
//! Indices 0..l are the segments of one partitioned path, each labeled with
//! the level of its host ball. The root interval first drops the span between
//! the first and last level-0 index. Any interval that still holds inactive
//! indices either activates everything (when no level is crowded) or
//! activates the β(L) outermost indices on each side of the first crowded
//! level L, finds a bridge through tight pairs and splits around it.

use serde::Serialize;

use crate::error::{Result, SpannerError};

#[derive(Clone, Debug, Default, Serialize)]
pub struct IntervalTreeReport {
    pub nodes: usize,
    /// Root has depth 0.
    pub depth: usize,
    pub case1: usize,
    pub case2: usize,
    /// Newly activated indices per level.
    pub activations: Vec<usize>,
}

/// Runs the interval tree over `levels` (one entry per segment, values in
/// 0..=max_level). `beta[L]` is β(L); `tight(i, j)` compares the host balls of
/// segments i and j; `activate(i)` is called once per newly active index.
pub fn run_interval_tree(
    levels: &[usize],
    max_level: usize,
    beta: &[usize],
    mut tight: impl FnMut(usize, usize) -> bool,
    mut activate: impl FnMut(usize),
) -> Result<IntervalTreeReport> {
    let l = levels.len();
    let mut report = IntervalTreeReport { nodes: 1, activations: vec![0; max_level + 1], ..Default::default() };
    if l == 0 {
        return Ok(report);
    }
    let mut active = vec![false; l];
    // Work list of (first, last, depth); an interval with first > last is empty.
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    let zeros: Vec<usize> = (0..l).filter(|&i| levels[i] == 0).collect();
    match (zeros.first(), zeros.last()) {
        (Some(&i1), Some(&i2)) => {
            report.nodes += 2;
            report.depth = 1;
            if i2 + 1 < l {
                stack.push((i2 + 1, l - 1, 1));
            }
            if i1 > 0 {
                stack.push((0, i1 - 1, 1));
            }
        }
        _ => stack.push((0, l - 1, 0)),
    }

    let mut mark = |i: usize, active: &mut Vec<bool>, report: &mut IntervalTreeReport| {
        if !active[i] {
            active[i] = true;
            report.activations[levels[i]] += 1;
            activate(i);
        }
    };

    while let Some((a, b, depth)) = stack.pop() {
        if !(a..=b).any(|i| !active[i]) {
            continue;
        }
        let by_level: Vec<Vec<usize>> =
            (0..=max_level).map(|lv| (a..=b).filter(|&i| levels[i] == lv).collect()).collect();
        let crowded = (1..=max_level).find(|&lv| {
            let idx = &by_level[lv];
            let p = idx.len();
            let beta_l = beta[lv].max(1);
            let mut q = 0usize;
            for x in 0..p {
                for y in x + 1..p {
                    if !tight(idx[x], idx[y]) {
                        q += 1;
                    }
                }
            }
            p as f64 > (4.0 * beta_l as f64).max(8.0 * q as f64 / beta_l as f64)
        });
        let Some(lv) = crowded else {
            report.case1 += 1;
            for i in a..=b {
                mark(i, &mut active, &mut report);
            }
            continue;
        };
        report.case2 += 1;
        let idx = &by_level[lv];
        let (p, beta_l) = (idx.len(), beta[lv].max(1));
        for &i in idx[..beta_l].iter().chain(&idx[p - beta_l..]) {
            mark(i, &mut active, &mut report);
        }
        let mut bridge = None;
        'search: for x in 0..beta_l {
            for y in p - beta_l..p {
                for z in beta_l..p - beta_l {
                    if tight(idx[x], idx[z]) && tight(idx[y], idx[z]) {
                        bridge = Some((x, y));
                        break 'search;
                    }
                }
            }
        }
        let Some((x, y)) = bridge else {
            return Err(SpannerError::Invariant(format!(
                "no bridge among {p} level-{lv} indices of interval [{a}, {b}] with beta {beta_l}"
            )));
        };
        report.nodes += 2;
        report.depth = report.depth.max(depth + 1);
        stack.push((idx[y], b, depth + 1));
        stack.push((a, idx[x], depth + 1));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(levels: &[usize], beta: &[usize], tight: impl FnMut(usize, usize) -> bool) -> (IntervalTreeReport, Vec<usize>) {
        let mut on = Vec::new();
        let r = run_interval_tree(levels, beta.len() - 1, beta, tight, |i| on.push(i)).unwrap();
        on.sort_unstable();
        (r, on)
    }

    #[test]
    fn single_segment_is_one_leaf() {
        let (r, on) = run(&[1], &[1, 2], |_, _| true);
        assert_eq!((r.case1, r.case2, r.depth), (1, 0, 0));
        assert_eq!(on, vec![0]);
    }

    #[test]
    fn level_zero_span_stays_inactive() {
        let (r, on) = run(&[1, 0, 2, 0, 1], &[1, 2, 2], |_, _| true);
        assert_eq!(on, vec![0, 4]);
        assert_eq!(r.depth, 1);
        let (r, on) = run(&[0, 0], &[1, 2], |_, _| true);
        assert!(on.is_empty());
        assert_eq!(r.case1, 0);
    }

    #[test]
    fn crowded_level_splits_around_a_bridge() {
        // Twelve level-1 segments with beta 2: p = 12 > max(8, 0) once all pairs are tight.
        let levels = vec![1; 12];
        let (r, on) = run(&levels, &[1, 2], |_, _| true);
        assert_eq!(r.case2, 1);
        // Smallest bridge is x = 0, y = 10; children [0, 0] and [10, 11] are already active.
        assert_eq!(on, vec![0, 1, 10, 11]);
        assert_eq!(r.depth, 1);
        assert_eq!(r.activations, vec![0, 4]);
    }

    #[test]
    fn missing_bridge_is_an_invariant_error() {
        let levels = vec![1; 12];
        // A predicate that turns false after the crowding count cannot be
        // bridged.
        let mut calls = 0;
        let tight = move |_: usize, _: usize| {
            calls += 1;
            calls <= 66
        };
        let r = run_interval_tree(&levels, 1, &[1, 2], tight, |_| {});
        assert!(matches!(r, Err(SpannerError::Invariant(_))));
    }

    #[test]
    fn non_tight_levels_activate_everything() {
        // Nothing tight: q = 66 and 8q/beta = 264 ≥ 12.
        let levels = vec![1; 12];
        let (r, on) = run(&levels, &[1, 2], |_, _| false);
        assert_eq!((r.case1, r.case2), (1, 0));
        assert_eq!(on.len(), 12);
    }
}
