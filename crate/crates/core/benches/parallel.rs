//! Sequential vs rayon execution of the data-parallel kernels.
//!
//! `cargo bench -p adiabatic-paths` compares both modes; with
//! `--no-default-features` the parallel arm falls back to plain iteration.

use std::hint::black_box;

use adiabatic_paths::effpot::{mc_experiment, McConfig};
use adiabatic_paths::instances::build_symmetric_instance;
use adiabatic_paths::operators::PathHamiltonian;
use adiabatic_paths::spectra::{gap_scan, uniform_grid};
use adiabatic_paths::study::{sat_gap_study, SatGapStudyConfig};
use adiabatic_paths::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("mc_experiment");
    g.sample_size(10);
    let cfg = McConfig::new(64, 1);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, cfg.trials), |b| {
            b.iter(|| mc_experiment(black_box(&cfg), exec).unwrap())
        });
    }
    g.finish();
}

fn gap_scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("gap_scan");
    g.sample_size(10);
    for n in [6usize, 8] {
        let h = PathHamiltonian::new(&build_symmetric_instance(n).unwrap(), None).unwrap();
        let grid = uniform_grid(41);
        for (name, exec) in MODES {
            g.bench_function(BenchmarkId::new(name, n), |b| {
                b.iter(|| gap_scan(|s| h.materialize(s), black_box(&grid), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn instance_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sat_gap_study");
    g.sample_size(10);
    let cfg = SatGapStudyConfig { n: 6, clauses: 18, instances: 8, grid_points: 21, refine: None, ..Default::default() };
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, cfg.instances), |b| {
            b.iter(|| sat_gap_study(black_box(&cfg), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, monte_carlo, gap_scans, instance_sweep);
criterion_main!(benches);
