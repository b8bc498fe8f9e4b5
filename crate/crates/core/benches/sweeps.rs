use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use majorana_chain::observables::{default_windows, split_defect, string_correlator, z2_index, IndexOptions, PairKind, StringCorrelatorSpec};
use majorana_chain::parallel;
use majorana_chain::quasifree::{build_model, params, BasisProjection, Boundary, GroundRoute, GroundSolver, SelfDualCut};
use majorana_chain::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn kitaev_ring(l: usize, lambda: f64) -> majorana_chain::quasifree::QuadraticHamiltonian {
    build_model("kitaev", l, &params([("J", 1.0), ("lambda", lambda)]), Boundary::Ring).unwrap()
}

fn k_sweep(c: &mut Criterion) {
    let h = kitaev_ring(400, 0.5);
    let g = GroundSolver::default().solve(&h).unwrap();
    let spec = StringCorrelatorSpec::pair(PairKind::X, (0..=100).collect());
    let mut group = c.benchmark_group("string_k_sweep_L400");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| string_correlator(black_box(&g), &spec, exec).unwrap())
        });
    }
    group.finish();
}

fn window_sweep(c: &mut Criterion) {
    let h = kitaev_ring(1000, 0.9);
    let g = GroundSolver::default().solve(&h).unwrap();
    let e = BasisProjection::new(&g);
    let cut = SelfDualCut::new(500);
    let windows = default_windows(&e, cut, 24).unwrap();
    let mut group = c.benchmark_group("split_window_sweep_L1000");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| split_defect(black_box(&e), cut, &windows, 1e-6, exec).unwrap())
        });
    }
    group.finish();
}

fn lambda_sweep(c: &mut Criterion) {
    let lambdas: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).filter(|&l| l != 1.0).collect();
    let opts = IndexOptions::default();
    let mut group = c.benchmark_group("index_lambda_sweep_L200");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                parallel::map(exec, &lambdas, |&lambda| {
                    let h = kitaev_ring(200, lambda);
                    let g = GroundSolver::new(GroundRoute::Auto, Execution::Sequential).solve(&h).unwrap();
                    z2_index(&g, SelfDualCut::new(100), Some(&h), &opts, Execution::Sequential).unwrap().index
                })
            })
        });
    }
    group.finish();
}

fn bloch_ground(c: &mut Criterion) {
    let h = kitaev_ring(1000, 0.5);
    let mut group = c.benchmark_group("bloch_ground_L1000");
    group.sample_size(10);
    for (name, exec) in MODES {
        let solver = GroundSolver::new(GroundRoute::Bloch, exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| solver.solve(black_box(&h)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, k_sweep, window_sweep, lambda_sweep, bloch_ground);
criterion_main!(benches);
