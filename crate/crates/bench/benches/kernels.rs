use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use num_complex::Complex64;
use relabel_bench::{box_grid, cn_like_system, coherent, driven};
use relabel_core::classical::integrate_tau;
use relabel_core::quantum::tridiag::solve_symmetric_constant_off;
use relabel_core::quantum::{
    covariance_experiment, CovarianceSetup, CrankNicolson, PropagatorConfig,
};
use relabel_core::{PhysicalConstants, PotentialSpec, TimeMap};

fn cn_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("cn_step");
    let constants = PhysicalConstants::default();
    for n in [512, 1024, 2048] {
        let mut kernel = CrankNicolson::new(box_grid(n), driven(), &constants);
        let mut amps = coherent(n).into_amplitudes();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| kernel.step(black_box(&mut amps), 0.3, 0.5, 5e-4).unwrap())
        });
    }
    group.finish();
}

fn tridiag(c: &mut Criterion) {
    let mut group = c.benchmark_group("tridiag_solve");
    for n in [512, 2048] {
        let (diag, off, rhs) = cn_like_system(n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); n];
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter_batched_ref(
                || rhs.clone(),
                |x| solve_symmetric_constant_off(&diag, off, x, &mut scratch).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn dopri(c: &mut Criterion) {
    let constants = PhysicalConstants::default();
    let map = TimeMap::sine_perturbed(0.3, 1.0, 0.0, 10.0).unwrap();
    c.bench_function("integrate_tau_sine_driven_tol1e-10", |b| {
        b.iter(|| {
            integrate_tau(
                &driven(),
                &constants,
                &map,
                black_box(1.0),
                0.0,
                (0.0, 10.0),
                1e-10,
            )
            .unwrap()
        })
    });
}

fn covariance(c: &mut Criterion) {
    let mut group = c.benchmark_group("covariance");
    group.sample_size(10);
    let setup = CovarianceSetup {
        constants: PhysicalConstants::default(),
        potential: PotentialSpec::Harmonic { omega: 1.0 },
        map: TimeMap::linear(2.0, 0.0, PI / 2.0).unwrap(),
        initial: coherent(512),
        tau_span: (0.0, PI / 2.0),
        config: PropagatorConfig::new(1e-3, 100).unwrap(),
        reference_dt: None,
        reference_span: None,
    };
    group.bench_function("linear_alpha_2_quarter_period", |b| {
        b.iter(|| covariance_experiment(black_box(&setup)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, cn_step, tridiag, dopri, covariance);
criterion_main!(benches);
