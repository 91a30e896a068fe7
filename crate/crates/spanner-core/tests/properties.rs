mod common;

use common::*;
use proptest::prelude::*;
use spanner_core::additive::build_additive_37;
use spanner_core::base::{allpairs6, multiplicative_spanner, pairwise6};
use spanner_core::clustering::{audit_clustering, build_clustering};
use spanner_core::graph::bfs::unique_shortest_path;
use spanner_core::graph::generate::random_pairs;
use spanner_core::graph::io::{read_edge_list, write_graph, LabelMap};
use spanner_core::graph::{EdgeSet, Graph};
use spanner_core::pairwise::build_pairwise_sublinear;
use spanner_core::partition::{check_partition, path_partition, BallDistances};
use spanner_core::preservers::distance_preserver;
use spanner_core::sublinear::{build_sublinear, SublinearParams};
use spanner_core::subset::build_subset_spanner;
use spanner_core::classes::sample_vertices;
use spanner_core::verify::slope_fit;

fn small_graph() -> impl Strategy<Value = (usize, usize, u64)> {
    (16usize..96).prop_flat_map(|n| (Just(n), n / 2..4 * n, any::<u64>()))
}

fn errors(g: &Graph, h: &EdgeSet, pairs: &[(u32, u32)]) -> Vec<Option<u32>> {
    pair_distances(g, h, pairs)
        .into_iter()
        .map(|(a, b)| match (a, b) {
            (INF, INF) => Some(0),
            (_, INF) => None,
            _ => Some(b - a),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clustering_covers_and_stays_in_window((n, m, seed) in small_graph(), r in 1usize..5, half in any::<bool>()) {
        let g = gnm(n, m, seed);
        let eps = if half { 0.5 } else { 0.25 };
        let cl = build_clustering(&g, r, eps).unwrap();
        let adj = adjacency(n, g.edges());
        let mut covered = vec![false; n];
        for b in &cl.balls {
            prop_assert!(b.radius >= r && b.radius as f64 <= cl.radius_cap());
            let row = bfs(&adj, b.center as usize);
            for v in &b.members {
                covered[*v as usize] = true;
                prop_assert!(row[*v as usize] as usize <= b.radius);
            }
        }
        prop_assert!(covered.iter().all(|&c| c));
        prop_assert!(audit_clustering(&g, &cl).unwrap().passed());
    }

    #[test]
    fn partitions_keep_their_guarantees((n, m, seed) in small_graph(), r in 1usize..4) {
        let g = gnm(n, m, seed);
        let cl = build_clustering(&g, r, 0.5).unwrap();
        let balls = BallDistances::new(&g, &cl).unwrap();
        for (s, t) in random_pairs(n, 4, seed) {
            let Some(path) = unique_shortest_path(&g, s, t).unwrap() else { continue };
            let p = path_partition(&g, &path, &balls).unwrap();
            let check = check_partition(&path, &p, &balls);
            prop_assert!(check.passed(), "{:?}", check);
        }
    }

    #[test]
    fn preservers_are_exact((n, m, seed) in small_graph(), count in 1usize..24) {
        let g = gnm(n, m, seed);
        let pairs = random_pairs(n, count, seed ^ 1);
        let p = distance_preserver(&g, &pairs).unwrap();
        prop_assert!(is_subgraph(&g, &p.edges));
        prop_assert!(errors(&g, &p.edges, &pairs).iter().all(|e| *e == Some(0)));
    }

    #[test]
    fn base_spanners_keep_their_stretch((n, m, seed) in small_graph()) {
        let g = gnm(n, m, seed);
        let pairs = random_pairs(n, 16, seed);
        let pw = pairwise6(&g, &pairs, seed).unwrap().edges;
        prop_assert!(is_subgraph(&g, &pw));
        prop_assert!(errors(&g, &pw, &pairs).iter().all(|e| matches!(e, Some(x) if *x <= 6)));
        let ap = allpairs6(&g, seed).unwrap().edges;
        prop_assert!(is_subgraph(&g, &ap));
        prop_assert!(all_pairs_max_error(&g, &ap).is_some_and(|e| e <= 6));
        let mu = multiplicative_spanner(&g, 3, seed).unwrap().edges;
        let vs: Vec<u32> = (0..n as u32).collect();
        for (a, b) in pair_distances(&g, &mu, &all_pairs(&vs)) {
            prop_assert!(a == INF || (b != INF && b <= 5 * a));
        }
    }

    #[test]
    fn sublinear_builders_give_subgraphs_with_finite_error((n, m, seed) in small_graph(), k in 1usize..4) {
        let g = gnm(n, m, seed);
        let params = SublinearParams::new(k, 0.5, seed).unwrap();
        let pairs = random_pairs(n, 12, seed);
        let pw = build_pairwise_sublinear(&g, &pairs, &params).unwrap().edges;
        prop_assert!(is_subgraph(&g, &pw));
        prop_assert!(errors(&g, &pw, &pairs).iter().all(Option::is_some));
        let all = build_sublinear(&g, &params).unwrap().edges;
        prop_assert!(is_subgraph(&g, &all));
        prop_assert!(all_pairs_max_error(&g, &all).is_some());
    }

    #[test]
    fn subset_and_additive_give_subgraphs_with_finite_error((n, m, seed) in small_graph(), t in 0usize..12) {
        let g = gnm(n, m, seed);
        let terminals = sample_vertices(n, t, seed);
        let sub = build_subset_spanner(&g, &terminals, 0.25).unwrap().edges;
        prop_assert!(is_subgraph(&g, &sub));
        let tp: Vec<(u32, u32)> = terminals
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| terminals[i + 1..].iter().map(move |&b| (a, b)))
            .collect();
        prop_assert!(errors(&g, &sub, &tp).iter().all(Option::is_some));
        let add = build_additive_37(&g, 0.25, seed).unwrap().edges;
        prop_assert!(is_subgraph(&g, &add));
        prop_assert!(all_pairs_max_error(&g, &add).is_some());
    }

    #[test]
    fn slope_fit_recovers_power_laws(a in 0.2f64..2.5, c in 0.1f64..100.0, base in 2.0f64..64.0) {
        let points: Vec<(f64, f64)> = (0..5).map(|i| {
            let x = base * 2f64.powi(i);
            (x, c * x.powf(a))
        }).collect();
        let fit = slope_fit(&points).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-9);
        prop_assert!(fit.residual < 1e-9);
    }

    #[test]
    fn edge_lists_round_trip((n, m, seed) in small_graph(), extra in 0usize..4) {
        let g0 = gnm(n, m, seed);
        // Trailing isolated vertices must survive the trip.
        let g = Graph::from_edges(n + extra, &g0.edges().collect::<Vec<_>>()).unwrap();
        let mut buf = Vec::new();
        write_graph(&mut buf, &g, &LabelMap::identity(g.n())).unwrap();
        let back = read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.graph.n(), g.n());
        prop_assert_eq!(back.duplicates, 0);
        prop_assert_eq!(back.graph.edge_set(), g.edge_set());
        let set = EdgeSet::from_pairs(g.edges().map(|(u, v)| (v, u)));
        prop_assert_eq!(set, g.edge_set());
    }
}
