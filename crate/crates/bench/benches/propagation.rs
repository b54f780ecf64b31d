use std::f64::consts::TAU;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multiport_core::dynamics::Propagator;
use multiport_core::experiments::SplitterDevice;
use multiport_core::{hopping_hamiltonian, interaction_hamiltonian, FockBasis};

fn eigendecomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagator");
    group.sample_size(10);
    // Dimensions 66, 231, 861.
    for atoms in [10usize, 20, 40] {
        let basis = FockBasis::new(3, atoms).unwrap();
        let h = (hopping_hamiltonian(&basis, 1.0) + interaction_hamiltonian(&basis, 0.02)).unwrap();
        group.bench_with_input(BenchmarkId::new("diagonalize", basis.dim()), &h, |b, h| {
            b.iter(|| Propagator::new(black_box(h)))
        });
    }
    group.finish();
}

fn evolution(c: &mut Criterion) {
    let device = SplitterDevice::new(3, 40, 0.02).unwrap();
    let psi = device.loaded_first_site();
    c.bench_function("evolve dim 861", |b| {
        b.iter(|| device.run(black_box(&psi), TAU / 9.0).unwrap())
    });
}

criterion_group!(benches, eigendecomposition, evolution);
criterion_main!(benches);
