use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use specpoint::dini::DiniGrid;
use specpoint::structured::truncated_shift_min;
use specpoint::{
    classify_plane, dini_estimate, sigma_curve, winding_number, ClassifyOptions, CurveOptions, GridSpec, MapSpec,
    PlanePoint, WindingOptions,
};

fn map(name: &str) -> MapSpec {
    MapSpec::from_name(name, &[]).unwrap()
}

fn curves(c: &mut Criterion) {
    let mut g = c.benchmark_group("sigma_curve");
    for name in ["abs_re_plus_i_im", "norm_plus_i_im"] {
        let f = map(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &f, |b, f| {
            b.iter(|| sigma_curve(black_box(f), &CurveOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn winding(c: &mut Criterion) {
    let f = map("norm_plus_i_im");
    let opts = WindingOptions::default();
    c.bench_function("winding_number", |b| {
        b.iter(|| winding_number(&f, black_box(PlanePoint::new(2.5, 0.3)), 1.0, &opts).unwrap())
    });
}

fn classify(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_plane");
    g.sample_size(10);
    let f = map("abs_re_plus_i_im");
    for res in [50, 100] {
        let opts = ClassifyOptions::new(GridSpec::square(2.0, res));
        g.bench_with_input(BenchmarkId::from_parameter(res), &opts, |b, o| {
            b.iter(|| classify_plane(&f, black_box(o)).unwrap())
        });
    }
    g.finish();
}

fn dini(c: &mut Criterion) {
    let f = map("sqrt_abs_sin_inv");
    let grid = DiniGrid::new(0.1, 0.6, 60);
    c.bench_function("dini_estimate", |b| b.iter(|| dini_estimate(&f, black_box(0.0), &grid).unwrap()));
}

fn shift(c: &mut Criterion) {
    let mut g = c.benchmark_group("truncated_shift_min");
    for n in [16, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| truncated_shift_min(black_box(PlanePoint::new(1.2, 0.5)), n).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, curves, winding, classify, dini, shift);
criterion_main!(benches);
