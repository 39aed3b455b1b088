use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use majlab_bench::{psd_pair, DIMS};
use majlab_core::falsifier::{search_min_slack, SearchConfig, Target};
use majlab_core::inequalities::{gt_chain, problem2_sides, proof_chain_all_k};

fn bench_problem2(c: &mut Criterion) {
    let mut group = c.benchmark_group("problem2_sides");
    for n in DIMS {
        let (t, s) = psd_pair(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(t, s), |b, (t, s)| {
            b.iter(|| problem2_sides(black_box(t), black_box(s), 3.0).unwrap())
        });
    }
    group.finish();
}

fn bench_gt_chain(c: &mut Criterion) {
    let mut group = c.benchmark_group("gt_chain");
    for n in DIMS {
        let (x, y) = psd_pair(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(x, y), |b, (x, y)| {
            b.iter(|| gt_chain(black_box(x), black_box(y), 0.5).unwrap())
        });
    }
    group.finish();
}

fn bench_proof_chain(c: &mut Criterion) {
    let (t, s) = psd_pair(8);
    c.bench_function("proof_chain_all_k/8", |b| {
        b.iter(|| proof_chain_all_k(black_box(&t), black_box(&s)).unwrap())
    });
}

fn bench_search(c: &mut Criterion) {
    let mut config = SearchConfig::new(Target::Problem2 { p: 2.0 }, 2, 1);
    config.restarts = 4;
    config.max_evals_per_restart = 500;
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("problem2_n2_4x500", |b| {
        b.iter(|| search_min_slack(black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_problem2,
    bench_gt_chain,
    bench_proof_chain,
    bench_search
);
criterion_main!(benches);
