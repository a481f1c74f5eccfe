use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pickleball_chains::analytics::{advantage_grid, diagonal_curve};
use pickleball_chains::par::Execution;
use pickleball_chains::rational::ratio;
use pickleball_chains::simulator::{simulate, FirstServer, SimConfig};
use pickleball_chains::{RallyParams, ScoringSystem};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn exact_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    let side_out = ScoringSystem::side_out(11).unwrap();
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new("diagonal_curve_so11_32", name), &exec, |b, &exec| {
            b.iter(|| diagonal_curve(side_out, 32, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("advantage_grid_so11_6x6", name), &exec, |b, &exec| {
            b.iter(|| advantage_grid(side_out, 6, exec).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    let config = |workers| SimConfig {
        system: ScoringSystem::modified_rally(21).unwrap(),
        params: RallyParams::even(ratio(11, 25)).unwrap(),
        first_server: FirstServer::A,
        num_games: 100_000,
        seed: 1,
        workers,
    };
    for (name, workers) in [("one_worker", Some(1)), ("all_workers", None)] {
        let cfg = config(workers);
        group.bench_function(BenchmarkId::new("mr21_100k_games", name), |b| b.iter(|| simulate(&cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, exact_sweeps, monte_carlo);
criterion_main!(benches);
