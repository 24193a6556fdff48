use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdds_bench::{benchmark, config, HALF_10};
use qdds_core::{
    delta_of_r, expand_symmetric, fir_cost, r_of_delta, run, stopband_attenuation_db,
    BenchmarkKind, FilterSpec, FirObjective, Objective, DEFAULT_SOLVE_TOL,
};

fn well_map(c: &mut Criterion) {
    let mut group = c.benchmark_group("well");
    group.bench_function("delta_of_r", |b| {
        b.iter(|| delta_of_r(black_box(0.37), black_box(5.0)))
    });
    for delta in [-1e6, -3.0, 0.5, 6.87, 1e12] {
        group.bench_with_input(BenchmarkId::new("r_of_delta", delta), &delta, |b, &d| {
            b.iter(|| r_of_delta(black_box(d), 5.0, DEFAULT_SOLVE_TOL))
        });
    }
    group.finish();
}

fn fir(c: &mut Criterion) {
    let spec = FilterSpec::new(10);
    let h = expand_symmetric(&HALF_10);
    let objective = FirObjective::new(spec).unwrap();
    let mut group = c.benchmark_group("fir");
    group.bench_function("fir_cost_direct", |b| {
        b.iter(|| fir_cost(black_box(&h), &spec))
    });
    group.bench_function("fir_cost_cached", |b| {
        b.iter(|| objective.evaluate(black_box(&HALF_10)))
    });
    group.bench_function("attenuation_8192", |b| {
        b.iter(|| stopband_attenuation_db(black_box(&h), &spec))
    });
    group.finish();
}

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("run");
    group.sample_size(20);
    for dim in [10, 30] {
        let objective = benchmark(BenchmarkKind::Rastrigin, dim);
        let cfg = config(dim, 20, 250);
        group.bench_with_input(BenchmarkId::new("rastrigin_p20_i250", dim), &dim, |b, _| {
            b.iter(|| run(&cfg, &objective).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, well_map, fir, engine);
criterion_main!(benches);
