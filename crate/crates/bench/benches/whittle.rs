use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orthopar::whittle::{block_toeplitz, block_toeplitz_inverse, whittle_recursion};
use orthopar_bench::cov_fixture;

fn recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("whittle_recursion");
    for p in [8, 16, 32] {
        let covs = cov_fixture(2, p);
        group.bench_with_input(BenchmarkId::from_parameter(p), &covs, |b, covs| {
            b.iter(|| whittle_recursion(black_box(covs), p).unwrap())
        });
    }
    group.finish();
}

// The recursive inverse against a dense LU inverse of the same matrix.
fn toeplitz_inverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("toeplitz_inverse");
    for p in [8, 16, 32] {
        let covs = cov_fixture(3, p);
        group.bench_with_input(BenchmarkId::new("recursive", p), &covs, |b, covs| {
            b.iter(|| block_toeplitz_inverse(black_box(covs), p).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dense", p), &covs, |b, covs| {
            b.iter(|| block_toeplitz(black_box(covs), p).unwrap().try_inverse().unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, recursion, toeplitz_inverse);
criterion_main!(benches);
