use std::f64::consts::PI;
use std::hint::black_box;

use conevac_bench::{geometries, pair};
use conevac_core::kernels::{tbar_cone_via_images, tbar_modesum_4d, ModeSumConfig};
use conevac_core::{lift, tbar, ActiveSet, Coord, KernelForm};
use criterion::{criterion_group, criterion_main, Criterion};

fn closed_forms(c: &mut Criterion) {
    let p = pair();
    let mut g = c.benchmark_group("tbar");
    for (name, geom) in geometries() {
        g.bench_function(name, |b| b.iter(|| tbar(&geom, black_box(&p), KernelForm::Renormalized)));
    }
    g.finish();
}

fn jets(c: &mut Criterion) {
    let p = pair();
    let active = ActiveSet::new(&[Coord::T, Coord::R, Coord::RPrime, Coord::Theta, Coord::ThetaPrime]).unwrap();
    let lifted = lift(&p, &active);
    let mut g = c.benchmark_group("tbar_jet5");
    for (name, geom) in geometries() {
        g.bench_function(name, |b| b.iter(|| tbar(&geom, black_box(&lifted), KernelForm::Renormalized)));
    }
    g.finish();
}

fn references(c: &mut Criterion) {
    let p = pair();
    let mut g = c.benchmark_group("reference");
    g.bench_function("image_sum_n1000", |b| b.iter(|| tbar_cone_via_images(black_box(&p), PI, 1000)));
    g.sample_size(10);
    g.bench_function("mode_sum_n40", |b| {
        b.iter(|| tbar_modesum_4d(black_box(&p), PI, ModeSumConfig::default()))
    });
    g.finish();
}

criterion_group!(benches, closed_forms, jets, references);
criterion_main!(benches);
