use std::hint::black_box;

use conevac_bench::{field_point, geometries};
use conevac_core::{stress_at, stress_t0, Coupling, Ladder, RenormMode};
use criterion::{criterion_group, criterion_main, Criterion};

fn at_cutoff(c: &mut Criterion) {
    let fp = field_point();
    let mut g = c.benchmark_group("stress_at");
    for (name, geom) in geometries() {
        g.bench_function(name, |b| {
            b.iter(|| stress_at(&geom, black_box(&fp), Coupling::quarter(), 0.2, RenormMode::KernelSubtraction))
        });
    }
    g.finish();
}

fn extrapolated(c: &mut Criterion) {
    let fp = field_point();
    let mut g = c.benchmark_group("stress_t0");
    for (name, geom) in geometries() {
        g.bench_function(name, |b| {
            b.iter(|| stress_t0(&geom, black_box(&fp), Coupling::conformal(), &Ladder::default()))
        });
    }
    g.finish();
}

criterion_group!(benches, at_cutoff, extrapolated);
criterion_main!(benches);
