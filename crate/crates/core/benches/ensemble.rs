use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sarima_core::{
    datasets, load_model, simulate_ensemble_parallel, simulate_ensemble_sequential, SarimaOrder,
    SimulationRequest,
};

fn bench_ensemble(c: &mut Criterion) {
    let seasonal = load_model(
        &[-0.3009, -0.0073],
        SarimaOrder::new(1, 1, 1, 0, 1, 0, 12),
        137.0,
        datasets::airline(),
    )
    .expect("frozen seasonal model");

    let mut group = c.benchmark_group("airline_ensemble");
    for &paths in &[1_000usize, 10_000] {
        let req = SimulationRequest::new(12, paths, Some(4321)).unwrap();
        group.bench_with_input(BenchmarkId::new("sequential", paths), &req, |b, req| {
            b.iter(|| simulate_ensemble_sequential(black_box(&seasonal), req).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", paths), &req, |b, req| {
            b.iter(|| simulate_ensemble_parallel(black_box(&seasonal), req).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ensemble);
criterion_main!(benches);
