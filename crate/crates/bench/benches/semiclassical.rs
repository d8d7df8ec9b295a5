use criterion::{criterion_group, criterion_main, Criterion};
use hmbec::semiclassical::default_z_grid;
use hmbec::{boundary_curves, fixed_points, region_classify, SemiclassicalCouplings};
use std::hint::black_box;

fn classify(c: &mut Criterion) {
    let couplings = SemiclassicalCouplings::new(0.5, 0.9);
    c.bench_function("fixed_points", |b| b.iter(|| fixed_points(black_box(&couplings), 0.1)));
    c.bench_function("region_classify", |b| {
        b.iter(|| region_classify(black_box(&couplings), 0.1))
    });
}

fn boundaries(c: &mut Criterion) {
    let z = default_z_grid(0.0, 400);
    let alpha: Vec<f64> = (0..121).map(|i| -3.0 + i as f64 / 20.0).collect();
    c.bench_function("boundary_curves/400", |b| {
        b.iter(|| boundary_curves(0.0, black_box(&z), &alpha).unwrap())
    });
}

criterion_group!(benches, classify, boundaries);
criterion_main!(benches);
