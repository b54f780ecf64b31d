use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multiport_core::splitter::{chi, find_balance_time, RingFourier, BALANCE_THRESHOLD};

fn chi_evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("chi");
    for sites in [3usize, 5, 9] {
        let ring = RingFourier::new(sites);
        group.bench_with_input(BenchmarkId::new("cached", sites), &ring, |b, ring| {
            b.iter(|| ring.chi(black_box(123.456)))
        });
        group.bench_with_input(BenchmarkId::new("fresh", sites), &sites, |b, &s| {
            b.iter(|| chi(s, black_box(123.456)))
        });
    }
    group.finish();
}

fn balance_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_balance_time");
    group.sample_size(10);
    group.bench_function("S=3 window 0:10", |b| {
        b.iter(|| find_balance_time(3, (0.0, 10.0), BALANCE_THRESHOLD).unwrap())
    });
    group.bench_function("S=9 window 0:600", |b| {
        b.iter(|| find_balance_time(9, (0.0, 600.0), BALANCE_THRESHOLD).unwrap())
    });
    group.finish();
}

criterion_group!(benches, chi_evaluation, balance_search);
criterion_main!(benches);
