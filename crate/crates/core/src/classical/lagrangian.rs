//! Conventional and homogeneous Lagrangians for `L = m xdot^2 / 2 - V(t, x)`,
//! their canonical momenta and Hamiltonians, and the two identities tying
//! them together.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PhysicalConstants, PotentialSpec, TimeMap};

/// Default central-difference step for the identity checks.
pub const FD_STEP: f64 = 1e-5;

/// Argument tuple `(T, xi, T', xi')` of the homogeneous Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangianPoint {
    pub t: f64,
    pub xi: f64,
    pub t_rate: f64,
    pub xi_rate: f64,
}

impl LagrangianPoint {
    pub fn new(t: f64, xi: f64, t_rate: f64, xi_rate: f64) -> Result<Self> {
        let pt = Self {
            t,
            xi,
            t_rate,
            xi_rate,
        };
        pt.check()?;
        Ok(pt)
    }

    fn check(&self) -> Result<()> {
        if !(self.t_rate > 0.0) {
            return Err(Error::domain(format!(
                "homogeneous Lagrangian is singular for T' <= 0 (T' = {})",
                self.t_rate
            )));
        }
        Ok(())
    }
}

/// `m xdot^2 / 2 - V(t, x)`.
pub fn lagrangian_t(pot: &PotentialSpec, c: &PhysicalConstants, t: f64, x: f64, xdot: f64) -> f64 {
    0.5 * c.mass() * xdot * xdot - pot.value(c.mass(), t, x)
}

/// `T' L(T, xi, xi'/T') = m xi'^2 / (2 T') - T' V(T, xi)`.
pub fn homogeneous_lagrangian(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    pt: &LagrangianPoint,
) -> Result<f64> {
    pt.check()?;
    Ok(homogeneous_unchecked(pot, c, pt))
}

fn homogeneous_unchecked(pot: &PotentialSpec, c: &PhysicalConstants, pt: &LagrangianPoint) -> f64 {
    0.5 * c.mass() * pt.xi_rate * pt.xi_rate / pt.t_rate
        - pt.t_rate * pot.value(c.mass(), pt.t, pt.xi)
}

/// Closed-form `(pi, pi_T) = (dL~/dxi', dL~/dT')`.
pub fn momenta_tau(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    pt: &LagrangianPoint,
) -> Result<(f64, f64)> {
    pt.check()?;
    let m = c.mass();
    let pi = m * pt.xi_rate / pt.t_rate;
    let pi_t =
        -0.5 * m * pt.xi_rate * pt.xi_rate / (pt.t_rate * pt.t_rate) - pot.value(m, pt.t, pt.xi);
    Ok((pi, pi_t))
}

/// Central-difference `(dL~/dT', dL~/dxi')` with step `h`.
///
/// The `T'` stencil must stay on the positive side, so `h < T'` is required.
pub fn velocity_partials_fd(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    pt: &LagrangianPoint,
    h: f64,
) -> Result<(f64, f64)> {
    pt.check()?;
    if !(h > 0.0 && h < pt.t_rate) {
        return Err(Error::domain(format!(
            "finite-difference step {h} must lie in (0, T' = {})",
            pt.t_rate
        )));
    }
    let at = |t_rate: f64, xi_rate: f64| {
        homogeneous_unchecked(
            pot,
            c,
            &LagrangianPoint {
                t_rate,
                xi_rate,
                ..*pt
            },
        )
    };
    let d_trate = (at(pt.t_rate + h, pt.xi_rate) - at(pt.t_rate - h, pt.xi_rate)) / (2.0 * h);
    let d_xirate = (at(pt.t_rate, pt.xi_rate + h) - at(pt.t_rate, pt.xi_rate - h)) / (2.0 * h);
    Ok((d_trate, d_xirate))
}

/// `p^2 / (2m) + V(t, x)`.
pub fn hamiltonian_t(pot: &PotentialSpec, c: &PhysicalConstants, t: f64, x: f64, p: f64) -> f64 {
    p * p / (2.0 * c.mass()) + pot.value(c.mass(), t, x)
}

/// `H~ = T'(tau) H(T(tau), xi, pi)`.
pub fn hamiltonian_tau(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    map: &TimeMap,
    tau: f64,
    xi: f64,
    pi: f64,
) -> Result<f64> {
    let (t, t_rate) = map.eval(tau)?;
    Ok(t_rate * hamiltonian_t(pot, c, t, xi, pi))
}

/// Residual of Euler's degree-one identity
/// `T' dL~/dT' + xi' dL~/dxi' - L~`, partials by central differences.
pub fn check_euler_homogeneity(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    pt: &LagrangianPoint,
) -> Result<f64> {
    check_euler_homogeneity_with_step(pot, c, pt, FD_STEP)
}

pub fn check_euler_homogeneity_with_step(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    pt: &LagrangianPoint,
    h: f64,
) -> Result<f64> {
    let (d_trate, d_xirate) = velocity_partials_fd(pot, c, pt, h)?;
    let l = homogeneous_unchecked(pot, c, pt);
    Ok(pt.t_rate * d_trate + pt.xi_rate * d_xirate - l)
}

/// `T' pi_T + H~` at a Lagrangian point, from the closed forms.
pub fn constraint_residual(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    pt: &LagrangianPoint,
) -> Result<f64> {
    let (pi, pi_t) = momenta_tau(pot, c, pt)?;
    let h_tau = pt.t_rate * hamiltonian_t(pot, c, pt.t, pt.xi, pi);
    Ok(pt.t_rate * pi_t + h_tau)
}

/// [`constraint_residual`] with `(T, T')` read off the time map at `tau`.
pub fn check_constraint(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    map: &TimeMap,
    tau: f64,
    xi: f64,
    xi_rate: f64,
) -> Result<f64> {
    let (t, t_rate) = map.eval(tau)?;
    constraint_residual(pot, c, &LagrangianPoint::new(t, xi, t_rate, xi_rate)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    /// Potential with `V = 3` at `(t, x) = (0, sqrt(6))`.
    fn v3() -> (PotentialSpec, f64) {
        (PotentialSpec::Harmonic { omega: 1.0 }, 6f64.sqrt())
    }

    #[test]
    fn lagrangian_t_worked_values() {
        let c = unit();
        let (pot, x) = v3();
        assert!((lagrangian_t(&pot, &c, 0.0, x, 2.0) + 1.0).abs() < 1e-14);
        assert_eq!(lagrangian_t(&PotentialSpec::Free, &c, 0.0, 5.0, 0.0), 0.0);
        let h = PotentialSpec::Harmonic { omega: 1.0 };
        assert_eq!(lagrangian_t(&h, &c, 9.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn homogeneous_worked_values() {
        let c = unit();
        let (pot, x) = v3();
        let pt = LagrangianPoint::new(0.0, x, 2.0, 2.0).unwrap();
        assert!((homogeneous_lagrangian(&pot, &c, &pt).unwrap() + 5.0).abs() < 1e-14);

        let free = PotentialSpec::Free;
        let a = LagrangianPoint::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let b = LagrangianPoint::new(0.0, 0.0, 2.0, 2.0).unwrap();
        assert_eq!(homogeneous_lagrangian(&free, &c, &a).unwrap(), 0.5);
        assert_eq!(homogeneous_lagrangian(&free, &c, &b).unwrap(), 1.0);
    }

    #[test]
    fn gauge_reduces_to_conventional() {
        let c = PhysicalConstants::new(1.0, 1.7).unwrap();
        let pot = PotentialSpec::DrivenHarmonic {
            omega0: 1.0,
            rate: 0.1,
        };
        for i in 0..50 {
            let (t, x, v) = (
                0.1 * i as f64,
                -2.0 + 0.09 * i as f64,
                1.3 - 0.07 * i as f64,
            );
            let pt = LagrangianPoint::new(t, x, 1.0, v).unwrap();
            assert_eq!(
                homogeneous_lagrangian(&pot, &c, &pt).unwrap(),
                lagrangian_t(&pot, &c, t, x, v)
            );
        }
    }

    #[test]
    fn singular_rate_is_domain_error() {
        let c = unit();
        let pot = PotentialSpec::Free;
        assert!(LagrangianPoint::new(0.0, 0.0, 0.0, 1.0).is_err());
        let bad = LagrangianPoint {
            t: 0.0,
            xi: 0.0,
            t_rate: -1.0,
            xi_rate: 1.0,
        };
        assert!(matches!(
            homogeneous_lagrangian(&pot, &c, &bad),
            Err(Error::Domain(_))
        ));
        assert!(matches!(momenta_tau(&pot, &c, &bad), Err(Error::Domain(_))));
        assert!(matches!(
            check_euler_homogeneity(&pot, &c, &bad),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn momenta_worked_values() {
        let c = unit();
        let pot = PotentialSpec::Harmonic { omega: 1.0 };
        // V(2) = 2
        let pt = LagrangianPoint::new(0.0, 2.0, 1.5, 3.0).unwrap();
        let (pi, pi_t) = momenta_tau(&pot, &c, &pt).unwrap();
        assert_eq!(pi, 2.0);
        assert_eq!(pi_t, -4.0);

        let p0 = 1.25;
        let gauge = LagrangianPoint::new(0.0, 0.3, 1.0, p0 / c.mass()).unwrap();
        assert_eq!(momenta_tau(&PotentialSpec::Free, &c, &gauge).unwrap().0, p0);
    }

    #[test]
    fn hamiltonian_worked_values() {
        let c = unit();
        let (pot, x) = v3();
        assert!((hamiltonian_t(&pot, &c, 0.0, x, 2.0) - 5.0).abs() < 1e-14);
        assert_eq!(hamiltonian_t(&PotentialSpec::Free, &c, 0.0, 1.0, 0.0), 0.0);

        let lin = TimeMap::linear(2.0, 0.0, 1.0).unwrap();
        let h = hamiltonian_tau(&pot, &c, &lin, 0.0, x, 2.0).unwrap();
        assert!((h - 2.5).abs() < 1e-14);

        let id = TimeMap::identity(0.0, 10.0).unwrap();
        for i in 0..20 {
            let (tau, xi, pi) = (0.4 * i as f64, 0.2 * i as f64 - 1.0, 0.5 - 0.1 * i as f64);
            assert_eq!(
                hamiltonian_tau(&pot, &c, &id, tau, xi, pi).unwrap(),
                hamiltonian_t(&pot, &c, tau, xi, pi)
            );
        }
        assert!(hamiltonian_tau(&pot, &c, &id, 11.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn legendre_consistency() {
        let c = PhysicalConstants::new(1.0, 2.5).unwrap();
        let pot = PotentialSpec::DrivenHarmonic {
            omega0: 0.8,
            rate: 0.3,
        };
        for i in 0..30 {
            let (t, x, p) = (0.2 * i as f64, 1.5 - 0.1 * i as f64, -2.0 + 0.13 * i as f64);
            let xdot = p / c.mass();
            let legendre = xdot * p - lagrangian_t(&pot, &c, t, x, xdot);
            assert!((legendre - hamiltonian_t(&pot, &c, t, x, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn euler_residual_worked_point() {
        let c = unit();
        let pot = PotentialSpec::Harmonic { omega: 1.0 };
        let pt = LagrangianPoint::new(0.3, 1.1, 2.0, 2.0).unwrap();
        assert!(check_euler_homogeneity(&pot, &c, &pt).unwrap().abs() < 1e-8);
        let rest = LagrangianPoint::new(0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(
            check_euler_homogeneity(&PotentialSpec::Free, &c, &rest)
                .unwrap()
                .abs()
                <= 1e-12
        );
    }

    #[test]
    fn constraint_worked_point_is_exact() {
        let c = unit();
        let pot = PotentialSpec::Harmonic { omega: 1.0 };
        let pt = LagrangianPoint::new(0.0, 2.0, 1.5, 3.0).unwrap();
        assert_eq!(constraint_residual(&pot, &c, &pt).unwrap(), 0.0);
        // same point reached through a time map: T'(0) = 1 + 0.5 = 1.5
        let map = TimeMap::sine_perturbed(0.5, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            check_constraint(&pot, &c, &map, 0.0, 2.0, 3.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn fd_step_must_fit_inside_rate() {
        let c = unit();
        let pt = LagrangianPoint::new(0.0, 0.0, 1e-6, 1.0).unwrap();
        assert!(velocity_partials_fd(&PotentialSpec::Free, &c, &pt, 1e-5).is_err());
    }
}
