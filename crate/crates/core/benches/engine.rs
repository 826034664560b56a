//! Sequential versus data-parallel execution of the GA and the oracle.
//!
//! Without the `parallel` feature both variants run sequentially, which makes
//! the bench a quick check that the fallback costs nothing extra.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use psic_core::fitness::FitnessWeights;
use psic_core::oracle::{exact_psi_c_with, OracleConfig};
use psic_core::problem::ColoringProblem;
use psic_core::rankga::{run, Execution, RankGaParams};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn ga(c: &mut Criterion) {
    let mut group = c.benchmark_group("ga_50_generations");
    group.sample_size(10);
    for (n, palette) in [(9, 15), (20, 48)] {
        let problem = ColoringProblem::new(n, palette, FitnessWeights::default()).unwrap();
        for (name, execution) in MODES {
            let params = RankGaParams { max_generations: 50, execution, ..RankGaParams::new(n * (n - 1) / 2) };
            group.bench_with_input(BenchmarkId::new(name, n), &params, |b, params| {
                b.iter(|| black_box(run(&problem, params).unwrap().best.fitness))
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (name, execution) in MODES {
        let config = OracleConfig { execution, ..OracleConfig::default() };
        group.bench_function(BenchmarkId::new(name, 5), |b| {
            b.iter(|| black_box(exact_psi_c_with(5, &config).unwrap().nodes))
        });
    }
    group.finish();
}

criterion_group!(benches, ga, oracle);
criterion_main!(benches);
