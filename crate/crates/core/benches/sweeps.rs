use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use affine_floer::coordinate_ring::verify_iso;
use affine_floer::floer_algebra::AlgebraModel;
use affine_floer::homotopy_words::brute_force_classify;
use affine_floer::verify::{associativity_sweep, numeric_suite, tropical_suite};
use affine_floer::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sweeps(c: &mut Criterion) {
    let model = AlgebraModel::Cp2;
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("ring_iso_n6", name), &exec, |b, &e| {
            b.iter(|| verify_iso(6, e).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("associativity_9", name), &exec, |b, &e| {
            b.iter(|| associativity_sweep(&model, 9, e))
        });
        group.bench_with_input(
            BenchmarkId::new("word_brute_force_k7", name),
            &exec,
            |b, &e| b.iter(|| brute_force_classify(7, 2, e)),
        );
        group.bench_with_input(BenchmarkId::new("tropical_4", name), &exec, |b, &e| {
            b.iter(|| tropical_suite(4, 10, e))
        });
        group.bench_with_input(BenchmarkId::new("numeric_grid", name), &exec, |b, &e| {
            b.iter(|| numeric_suite(1e-10, e))
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
