use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relabel_core::classical::*;
use relabel_core::{CenterPath, PhysicalConstants, PotentialSpec, TimeMap};

fn families() -> Vec<PotentialSpec> {
    vec![
        PotentialSpec::Free,
        PotentialSpec::Harmonic { omega: 1.0 },
        PotentialSpec::DrivenHarmonic {
            omega0: 1.0,
            rate: 0.1,
        },
        PotentialSpec::MovingWell {
            stiffness: 1.5,
            center: CenterPath {
                offset: 0.2,
                velocity: 0.1,
                amplitude: 0.4,
                frequency: 1.3,
            },
        },
    ]
}

#[test]
fn homogeneity_residual_over_random_points() {
    let c = PhysicalConstants::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for pot in families() {
        let worst = (0..100)
            .map(|_| {
                let pt = LagrangianPoint::new(
                    rng.random_range(0.0..5.0),
                    rng.random_range(-3.0..3.0),
                    rng.random_range(0.2..3.0),
                    rng.random_range(-3.0..3.0),
                )
                .unwrap();
                check_euler_homogeneity(&pot, &c, &pt).unwrap().abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-7, "{pot:?}: {worst:e}");
    }
}

#[test]
fn finite_difference_momenta_match_closed_form() {
    let c = PhysicalConstants::new(1.0, 1.3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for pot in families() {
        for _ in 0..100 {
            let pt = LagrangianPoint::new(
                rng.random_range(0.0..5.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.2..3.0),
                rng.random_range(-3.0..3.0),
            )
            .unwrap();
            let (pi, pi_t) = momenta_tau(&pot, &c, &pt).unwrap();
            let (d_trate, d_xirate) = velocity_partials_fd(&pot, &c, &pt, 1e-5).unwrap();
            let rel = |fd: f64, exact: f64| (fd - exact).abs() / exact.abs().max(1.0);
            assert!(rel(d_xirate, pi) < 1e-7, "pi {d_xirate} vs {pi}");
            assert!(rel(d_trate, pi_t) < 1e-7, "pi_T {d_trate} vs {pi_t}");
        }
    }
}

#[test]
fn constraint_holds_to_rounding_under_sine_map() {
    let c = PhysicalConstants::default();
    let map = TimeMap::sine_perturbed(0.3, 1.0, 0.0, 10.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for pot in families() {
        for _ in 0..100 {
            let r = check_constraint(
                &pot,
                &c,
                &map,
                rng.random_range(0.0..10.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            )
            .unwrap();
            assert!(r.abs() < 1e-12, "{r:e}");
        }
    }
    let id = TimeMap::identity(0.0, 10.0).unwrap();
    let h = PotentialSpec::Harmonic { omega: 1.0 };
    for i in 0..50 {
        let r = check_constraint(&h, &c, &id, 0.2 * i as f64, 1.0 - 0.03 * i as f64, 0.5).unwrap();
        assert!(r.abs() < 1e-12);
    }
}

#[test]
fn linear_map_trajectories_agree() {
    let c = PhysicalConstants::default();
    let pot = PotentialSpec::Harmonic { omega: 1.0 };
    let map = TimeMap::linear(2.0, 0.0, 4.0 * PI).unwrap();
    let tt = integrate_t(&pot, &c, 1.0, 0.0, (0.0, 2.0 * PI), 1e-10).unwrap();
    let tr = integrate_tau(&pot, &c, &map, 1.0, 0.0, (0.0, 4.0 * PI), 1e-10).unwrap();
    assert!(trajectory_equivalence(&tt, &tr, &map).unwrap() < 1e-6);
}

#[test]
fn sine_map_driven_trajectories_converge_with_tolerance() {
    let c = PhysicalConstants::default();
    let pot = PotentialSpec::DrivenHarmonic {
        omega0: 1.0,
        rate: 0.1,
    };
    let map = TimeMap::sine_perturbed(0.3, 1.0, 0.0, 10.0).unwrap();
    let span = map.t_interval();
    let err = |tol| {
        let tt = integrate_t(&pot, &c, 1.0, 0.0, span, tol).unwrap();
        let tr = integrate_tau(&pot, &c, &map, 1.0, 0.0, (0.0, 10.0), tol).unwrap();
        trajectory_equivalence(&tt, &tr, &map).unwrap()
    };
    let coarse = err(1e-9);
    let fine = err(1e-12);
    assert!(coarse < 1e-5, "{coarse:e}");
    assert!(fine < coarse / 100.0, "{fine:e} vs {coarse:e}");
}

proptest! {
    #[test]
    fn homogeneous_lagrangian_is_degree_one(
        t in 0.0f64..5.0, xi in -3.0f64..3.0, rate in 0.2f64..3.0,
        xi_rate in -3.0f64..3.0, lambda in 0.1f64..10.0,
    ) {
        let c = PhysicalConstants::default();
        for pot in families() {
            let a = LagrangianPoint::new(t, xi, rate, xi_rate).unwrap();
            let b = LagrangianPoint::new(t, xi, lambda * rate, lambda * xi_rate).unwrap();
            let la = homogeneous_lagrangian(&pot, &c, &a).unwrap();
            let lb = homogeneous_lagrangian(&pot, &c, &b).unwrap();
            prop_assert!((lb - lambda * la).abs() <= 1e-12 * (1.0 + lb.abs()));
        }
    }

    #[test]
    fn classical_covariance_for_random_initial_data(
        x0 in -2.0f64..2.0, p0 in -2.0f64..2.0, amp in -0.5f64..0.5,
    ) {
        let c = PhysicalConstants::default();
        let pot = PotentialSpec::Harmonic { omega: 1.0 };
        let map = TimeMap::sine_perturbed(amp, 1.0, 0.0, 6.0).unwrap();
        let tt = integrate_t(&pot, &c, x0, p0, map.t_interval(), 1e-10).unwrap();
        let tr = integrate_tau(&pot, &c, &map, x0, p0, (0.0, 6.0), 1e-10).unwrap();
        prop_assert!(trajectory_equivalence(&tt, &tr, &map).unwrap() < 1e-7);
    }
}
