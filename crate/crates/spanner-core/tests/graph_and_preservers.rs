mod common;

use common::*;
use spanner_core::graph::bfs::{ball, ball_boundary, bfs_distances, unique_shortest_path};
use spanner_core::graph::generate::{random_pairs, GraphKind};
use spanner_core::graph::{edge_rank, Graph};
use spanner_core::classes::sample_vertices;
use spanner_core::preservers::{bottleneck, consistent_paths, distance_preserver};

#[test]
fn bfs_rows_match_floyd_warshall() {
    let g = gnm(64, 256, 11);
    let fw = floyd_warshall(64, g.edges());
    for s in 0..64 {
        assert_eq!(bfs_distances(&g, s).unwrap(), fw[s as usize]);
    }
}

#[test]
fn small_balls_and_boundaries() {
    let p9 = kind(GraphKind::Path { n: 9 });
    assert_eq!(ball(&p9, 4, 2).unwrap().members, vec![2, 3, 4, 5, 6]);
    assert_eq!(ball(&p9, 4, 0).unwrap().members, vec![4]);
    assert_eq!(ball_boundary(&p9, 4, 2).unwrap(), vec![2, 6]);
    assert!(ball_boundary(&p9, 0, 9).unwrap().is_empty());
    let c100 = kind(GraphKind::Cycle { n: 100 });
    assert_eq!(ball(&c100, 0, 3).unwrap().len(), 7);
}

#[test]
fn boundaries_are_oracle_level_sets() {
    let g = gnm(64, 256, 12);
    let fw = floyd_warshall(64, g.edges());
    for c in [0u32, 17, 63] {
        for d in 0..6 {
            let expect: Vec<u32> = (0..64).filter(|&v| fw[c as usize][v as usize] == d as u32).collect();
            assert_eq!(ball_boundary(&g, c, d).unwrap(), expect);
            let inside: Vec<u32> = (0..64).filter(|&v| fw[c as usize][v as usize] <= d as u32).collect();
            assert_eq!(ball(&g, c, d).unwrap().members, inside);
        }
    }
}

#[test]
fn four_cycle_tie_is_settled_by_edge_rank() {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let cost = |p: &[u32]| p.windows(2).map(|w| edge_rank(w[0], w[1]) as u128).sum::<u128>();
    let (a, b) = (vec![0, 1, 2], vec![0, 3, 2]);
    let expect = if cost(&a) < cost(&b) { a } else { b };
    for _ in 0..3 {
        assert_eq!(unique_shortest_path(&g, 0, 2).unwrap().unwrap(), expect);
    }
    let mut back = unique_shortest_path(&g, 2, 0).unwrap().unwrap();
    back.reverse();
    assert_eq!(back, expect);
}

#[test]
fn tree_paths_are_unique_paths() {
    let g = kind(GraphKind::Tree { n: 200 });
    let fw = floyd_warshall(200, g.edges());
    for (s, t) in random_pairs(200, 50, 3) {
        let p = unique_shortest_path(&g, s, t).unwrap().unwrap();
        assert_eq!(p.len() as u32 - 1, fw[s as usize][t as usize]);
        assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
    }
}

#[test]
fn consistent_family_on_random_graphs() {
    let g = gnm(64, 256, 5);
    let s = sample_vertices(64, 12, 1);
    let fam = consistent_paths(&g, &s).unwrap();
    let paths: Vec<&Vec<u32>> = fam.paths.values().collect();
    assert!(intersections_contiguous(&paths));

    let g = gnm(256, 1024, 6);
    let s = sample_vertices(256, 16, 2);
    let fam = consistent_paths(&g, &s).unwrap();
    assert_eq!(fam.paths.len(), 120);
    let fw = floyd_warshall(256, g.edges());
    for (&(a, b), p) in &fam.paths {
        assert_eq!(p.len() as u32 - 1, fw[a as usize][b as usize]);
    }
    let paths: Vec<&Vec<u32>> = fam.paths.values().collect();
    assert!(intersections_contiguous(&paths));
    let c = fam.union_size() as f64 / (256.0 + 16.0 * 256.0);
    assert!(c <= 1.0, "union constant {c}");
}

#[test]
fn tree_family_is_the_union_of_tree_paths() {
    let g = kind(GraphKind::Tree { n: 300 });
    let s = sample_vertices(300, 10, 9);
    let fam = consistent_paths(&g, &s).unwrap();
    let mut expect = std::collections::BTreeSet::new();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            let p = unique_shortest_path(&g, a, b).unwrap().unwrap();
            for w in p.windows(2) {
                expect.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
    }
    assert_eq!(fam.union.iter().collect::<std::collections::BTreeSet<_>>(), expect);
}

fn bottleneck_bound_holds(g: &Graph, c: u32, r1: usize, r2: usize, r: usize) {
    let b = bottleneck(g, c, r1, r2, r).unwrap();
    assert!(r1 < b.radius && b.radius <= r2);
    let bound = 2.0 * b.ball_size as f64 / (r2 - r1) as f64;
    assert!(b.boundary.len() as f64 <= bound, "{} > {bound}", b.boundary.len());
    // Brute-force minimum over (r1, r2].
    let row = bfs(&adjacency(g.n(), g.edges()), c as usize);
    let pair = |d: u32| row.iter().filter(|&&x| x == d || x == d + 1).count();
    let best = (r1 as u32 + 1..=r2 as u32).map(pair).min().unwrap();
    assert_eq!(b.boundary.len(), best);
    assert_eq!(b.ball_size, row.iter().filter(|&&x| x <= r as u32).count());
}

#[test]
fn bottleneck_meets_its_bound() {
    let p = kind(GraphKind::Path { n: 100 });
    for d in 6..=20u32 {
        assert!(ball_boundary(&p, 50, d as usize).unwrap().len() + ball_boundary(&p, 50, d as usize + 1).unwrap().len() <= 4);
        assert!(4.0 <= 2.0 * 81.0 / 15.0);
    }
    bottleneck_bound_holds(&p, 50, 5, 20, 40);
    let g = gnm(256, 1024, 4);
    for c in [0, 100, 255] {
        bottleneck_bound_holds(&g, c, 1, 3, 4);
        bottleneck_bound_holds(&g, c, 1, 5, 6);
    }
    let star = kind(GraphKind::Star { n: 20 });
    let b = bottleneck(&star, 0, 1, 2, 3).unwrap();
    assert_eq!((b.radius, b.boundary.len()), (2, 0));
    assert!(bottleneck(&star, 0, 2, 2, 3).is_err());
}

#[test]
fn preserver_is_exact_on_random_pairs() {
    let g = gnm(256, 1024, 8);
    let pairs = random_pairs(256, 32, 1);
    let pres = distance_preserver(&g, &pairs).unwrap();
    assert!(is_subgraph(&g, &pres.edges));
    for (dg, dh) in pair_distances(&g, &pres.edges, &pairs) {
        assert_eq!(dg, dh);
    }
    assert!(distance_preserver(&g, &[]).unwrap().edges.is_empty());
    let tree = kind(GraphKind::Tree { n: 128 });
    let pairs = random_pairs(128, 20, 2);
    let pres = distance_preserver(&tree, &pairs).unwrap();
    assert_eq!(max_error(&tree, &pres.edges, &pairs), Some(0));
}

#[test]
fn generator_counts() {
    assert_eq!(kind(GraphKind::Path { n: 5 }).m(), 4);
    assert_eq!(kind(GraphKind::Grid { rows: 10, cols: 10 }).m(), 180);
    assert_eq!(gnm(100, 300, 1), gnm(100, 300, 1));
}
