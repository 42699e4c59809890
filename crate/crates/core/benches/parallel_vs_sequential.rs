use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use walklab::conductance::conductance_exact;
use walklab::electrical::full_matrix;
use walklab::walk::{estimate_cover, StopCriterion, WalkConfig};
use walklab::{Executor, GraphFamily, TransitionKernel};

const EXECUTORS: [(&str, Executor); 2] = [("sequential", Executor::Sequential), ("parallel", Executor::Parallel)];

fn cover_estimate(c: &mut Criterion) {
    let g = GraphFamily::Torus2d(10, 10).generate().unwrap();
    let config = WalkConfig::new(&g, StopCriterion::Cover);
    let mut group = c.benchmark_group("estimate_cover/torus10x10/2000");
    group.sample_size(10);
    for (name, exec) in EXECUTORS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| estimate_cover(&config, 2000, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn resistance_matrix(c: &mut Criterion) {
    let g = GraphFamily::Grid2d(12, 12).generate().unwrap();
    let mut group = c.benchmark_group("full_matrix/grid12x12");
    group.sample_size(10);
    for (name, exec) in EXECUTORS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| full_matrix(&g, exec).unwrap()));
    }
    group.finish();
}

fn exact_conductance(c: &mut Criterion) {
    let g = GraphFamily::Torus2d(4, 5).generate().unwrap();
    let k = TransitionKernel::from_graph(&g, false).unwrap();
    let mut group = c.benchmark_group("conductance_exact/torus4x5");
    group.sample_size(10);
    for (name, exec) in EXECUTORS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| conductance_exact(&k, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, cover_estimate, resistance_matrix, exact_conductance);
criterion_main!(benches);
