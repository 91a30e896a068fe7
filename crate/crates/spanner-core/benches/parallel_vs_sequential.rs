//! The same builds on a one-thread pool and on the default pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spanner_core::additive::build_additive_37;
use spanner_core::graph::generate::{gen_graph, GraphKind};
use spanner_core::sublinear::{build_sublinear, SublinearParams};
use spanner_core::verify::{stretch_report, PairSelection};

fn pools() -> Vec<(String, Option<rayon::ThreadPool>)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    vec![("sequential".into(), Some(one)), (format!("pool-{}", rayon::current_num_threads()), None)]
}

fn run<R: Send>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn builders(c: &mut Criterion) {
    let g = gen_graph(&GraphKind::Gnm { n: 1024, m: 4096 }, 7).unwrap();
    let params = SublinearParams::new(2, 0.25, 7).unwrap();
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("sublinear_k2", &name), |b| {
            b.iter(|| run(&pool, || build_sublinear(&g, &params).unwrap().edges.len()))
        });
        group.bench_function(BenchmarkId::new("additive_37", &name), |b| {
            b.iter(|| run(&pool, || build_additive_37(&g, 0.25, 7).unwrap().edges.len()))
        });
    }
    group.finish();
}

fn verifier(c: &mut Criterion) {
    let g = gen_graph(&GraphKind::Gnm { n: 1024, m: 4096 }, 3).unwrap();
    let h = build_additive_37(&g, 0.25, 3).unwrap().edges;
    let mut group = c.benchmark_group("stretch_report");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("all_pairs", &name), |b| {
            b.iter(|| run(&pool, || stretch_report(&g, &h, &PairSelection::All).unwrap().max_error))
        });
    }
    group.finish();
}

criterion_group!(benches, builders, verifier);
criterion_main!(benches);
