//! Throughput benchmarks for the hot paths: segmented squarefree sieving,
//! range verification, streak scanning, CRT solving, and the margin tables.

use criterion::{criterion_group, criterion_main, Criterion};
use sfprime_core::analytic::{self, BoundVariant};
use sfprime_core::crt::{crt_solve, naive_bound, CongruenceSystem};
use sfprime_core::primes::PrimeTable;
use sfprime_core::squarefree::sieve_segment;
use sfprime_core::verify::{compute_streaks, verify_range, VerifyConfig};
use std::hint::black_box;

fn bench_prime_table(c: &mut Criterion) {
    c.bench_function("prime_table_build_1e7", |b| {
        b.iter(|| PrimeTable::build(black_box(10_000_000)).unwrap())
    });
}

fn bench_sieve_segment(c: &mut Criterion) {
    let table = PrimeTable::build(32_000).unwrap();
    c.bench_function("sieve_segment_1e7_at_1e9", |b| {
        b.iter(|| sieve_segment(black_box(1_000_000_000), 1_010_000_000, &table).unwrap())
    });
}

fn bench_verify(c: &mut Criterion) {
    let config = VerifyConfig {
        segment_size: 1_000_000,
        workers: 1,
        checkpoint: None,
    };
    c.bench_function("verify_range_1e6", |b| {
        b.iter(|| verify_range(black_box(1), 1_000_000, &config).unwrap())
    });
}

fn bench_streaks(c: &mut Criterion) {
    c.bench_function("compute_streaks_1e6", |b| {
        b.iter(|| compute_streaks(black_box(1_000_000), 1_000_000).unwrap())
    });
}

fn bench_crt(c: &mut Criterion) {
    let system = CongruenceSystem::paper_system();
    let table = PrimeTable::build(100).unwrap();
    c.bench_function("crt_solve_paper_system", |b| {
        b.iter(|| crt_solve(black_box(&system)).unwrap())
    });
    c.bench_function("naive_bound_k16", |b| {
        b.iter(|| naive_bound(black_box(16), &table).unwrap())
    });
}

fn bench_analytic(c: &mut Criterion) {
    let table = PrimeTable::build(100).unwrap();
    c.bench_function("delta_table_f4", |b| {
        b.iter(|| analytic::delta_table(black_box(BoundVariant::F4), &table).unwrap())
    });
    c.bench_function("li_1e6", |b| {
        b.iter(|| analytic::li(black_box(1e6)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_prime_table, bench_sieve_segment, bench_verify, bench_streaks,
              bench_crt, bench_analytic
}
criterion_main!(benches);
