use criterion::{criterion_group, criterion_main, Criterion};
use fourfold::fourblocks::{curvature_blocks, spectral_report};
use fourfold::geomcore::curvature_at;
use fourfold::metricdsl::builtin;
use fourfold::twistor::{fiber_scan, twistor_frame_curvature, TwistorChart};
use std::hint::black_box;

fn curvature(c: &mut Criterion) {
    for name in ["s4", "cp2", "schwarzschild", "eguchi_hanson"] {
        let m = builtin(name, &[]).unwrap();
        let p = m.suggested_points()[0].clone();
        c.bench_function(&format!("curvature_at/{name}"), |b| {
            b.iter(|| curvature_at(&m, black_box(&p)).unwrap())
        });
    }
}

fn spectral(c: &mut Criterion) {
    let m = builtin("cp2", &[]).unwrap();
    let p = m.suggested_points()[0].clone();
    let curv = curvature_at(&m, &p).unwrap();
    let blocks = curvature_blocks(&curv, m.orientation()).unwrap();
    c.bench_function("spectral_report/cp2", |b| {
        b.iter(|| spectral_report(&m, black_box(&p), &curv, &blocks).unwrap())
    });
}

fn fiber(c: &mut Criterion) {
    let m = builtin("s2xs2", &[]).unwrap();
    let curv = curvature_at(&m, &m.suggested_points()[0]).unwrap();
    let tw = twistor_frame_curvature(&curv, m.orientation()).unwrap();
    c.bench_function("fiber_scan/s2xs2/256", |b| {
        b.iter(|| fiber_scan(black_box(&tw), 1.0, 256).unwrap())
    });
}

fn twistor_chart(c: &mut Criterion) {
    let m = builtin("schwarzschild", &[]).unwrap();
    let x = m.suggested_points()[0].clone();
    let chart = TwistorChart::new(m, 1.0).unwrap();
    let p = TwistorChart::point(&x, 0.3, -0.7);
    let mut group = c.benchmark_group("twistor_chart");
    group.sample_size(10);
    group.bench_function("curvature_at/schwarzschild", |b| {
        b.iter(|| curvature_at(&chart, black_box(&p)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, curvature, spectral, fiber, twistor_chart);
criterion_main!(benches);
