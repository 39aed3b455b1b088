use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use majlab_bench::{hermitian, psd_pair, DIMS};
use majlab_core::{hermitian_eigen, psd_power};

fn bench_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eigen");
    for n in DIMS {
        let a = hermitian(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| hermitian_eigen(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bench_power(c: &mut Criterion) {
    let mut group = c.benchmark_group("psd_power_half");
    for n in DIMS {
        let (a, _) = psd_pair(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| psd_power(black_box(a), 0.5).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_eigen, bench_power);
criterion_main!(benches);
