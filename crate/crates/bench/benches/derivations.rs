//! Route benchmarks: the composition-enumerating stable expansion against
//! the associated-Stirling fast form, the two variance-rewriting
//! algorithms, and the brute-force oracle.

use binomial_moments::moments::{
    central_moment_fast, central_moment_stable, central_moment_variance_from, MomentKind,
    VarianceMethod,
};
use binomial_moments::numeric::parse_rational;
use binomial_moments::oracle::oracle_moment;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_central_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("central_moment");
    for d in [8u32, 12, 16, 20] {
        group.bench_with_input(BenchmarkId::new("stable", d), &d, |b, &d| {
            b.iter(|| central_moment_stable(d))
        });
        group.bench_with_input(BenchmarkId::new("fast", d), &d, |b, &d| {
            b.iter(|| central_moment_fast(d).unwrap())
        });
    }
    group.finish();
}

fn bench_variance_algorithms(c: &mut Criterion) {
    let mut group = c.benchmark_group("variance_form");
    for d in [6u32, 10, 14] {
        let source = central_moment_stable(d);
        group.bench_with_input(BenchmarkId::new("symmetrize", d), &d, |b, _| {
            b.iter(|| central_moment_variance_from(&source, VarianceMethod::Symmetrize).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("reduction", d), &d, |b, _| {
            b.iter(|| central_moment_variance_from(&source, VarianceMethod::Reduction).unwrap())
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let p = parse_rational("1/3").unwrap();
    c.bench_function("oracle_moment_n64_d8", |b| {
        b.iter(|| oracle_moment(64, &p, 8, MomentKind::Central).unwrap())
    });
}

criterion_group!(benches, bench_central_routes, bench_variance_algorithms, bench_oracle);
criterion_main!(benches);
