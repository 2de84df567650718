use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use giro::harness::{lemma1_experiment, run_experiment, ExperimentConfig, PolicyKind, PolicySpec};
use giro::Execution;

fn config(runs: u64) -> ExperimentConfig {
    ExperimentConfig {
        n: 2000,
        runs,
        arms: 10,
        policies: vec![
            PolicySpec::new("giro", PolicyKind::Giro { a: 1.0 }),
            PolicySpec::new("ucb1", PolicyKind::Ucb1),
            PolicySpec::new("ts", PolicyKind::Ts),
        ],
        ..ExperimentConfig::default()
    }
}

fn simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for runs in [8u64, 32] {
        let cfg = config(runs);
        for (label, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, runs), &cfg, |b, cfg| {
                b.iter(|| run_experiment(cfg, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn lock_in(c: &mut Criterion) {
    let mut group = c.benchmark_group("lemma1");
    group.sample_size(10);
    for (label, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_function(label, |b| {
            b.iter(|| lemma1_experiment(0.6, 0.2, 500, 400, 1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, simulate, lock_in);
criterion_main!(benches);
