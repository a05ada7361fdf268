//! Sequential vs. data-parallel class runs, plus single-solver baselines.
//!
//! `cargo bench` — the parallel arm uses the default rayon pool; building
//! without the `parallel` feature makes both arms sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use adc_core::bench::{run_class, run_class_sequential, Algorithm, RunSpec, StopRule};
use adc_core::testbed::{classic, generate_class, GklsParams};

fn small_class() -> Vec<adc_core::ProblemInstance> {
    let params = GklsParams {
        dimension: 2,
        minima: 10,
        global_value: -1.0,
        global_radius: 0.20,
        global_dist: 0.90,
        seed: 42,
    };
    generate_class(&params).expect("feasible parameters")[..16].to_vec()
}

fn spec(algorithm: Algorithm, jobs: usize) -> RunSpec {
    RunSpec {
        algorithm,
        epsilon: 1e-4,
        rule: StopRule::new(1e-4, 4000).expect("valid rule"),
        jobs,
    }
}

fn bench_class_runs(c: &mut Criterion) {
    let problems = small_class();
    let mut group = c.benchmark_group("class_runs");
    group.sample_size(10);
    for algorithm in [Algorithm::Adc, Algorithm::Direct, Algorithm::DirectL] {
        group.bench_with_input(
            BenchmarkId::new("sequential", algorithm.label()),
            &algorithm,
            |b, &alg| {
                b.iter(|| run_class_sequential(&problems, "bench", &spec(alg, 1)).unwrap())
            },
        );
        group.bench_with_input(
            BenchmarkId::new("parallel", algorithm.label()),
            &algorithm,
            |b, &alg| b.iter(|| run_class(&problems, "bench", &spec(alg, 0)).unwrap()),
        );
    }
    group.finish();
}

fn bench_single_solvers(c: &mut Criterion) {
    let branin = classic("branin").expect("known function");
    let mut group = c.benchmark_group("branin_solve");
    for algorithm in [Algorithm::Adc, Algorithm::Direct, Algorithm::DirectL] {
        group.bench_with_input(
            BenchmarkId::from_parameter(algorithm.label()),
            &algorithm,
            |b, &alg| {
                b.iter(|| {
                    adc_core::bench::run_one(&branin, &spec(alg, 1)).unwrap()
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_class_runs, bench_single_solvers);
criterion_main!(benches);
