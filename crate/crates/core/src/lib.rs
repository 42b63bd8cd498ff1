//! Classical and quantum dynamics under a reparametrized clock.
//!
//! A monotone relabeling `t = T(tau)` turns the Lagrangian `L` into the
//! degree-one homogeneous `T' L(T, xi, xi'/T')` and the generator of
//! evolution into `T' H`. This crate implements both sides of that picture:
//!
//! * [`model`]: time maps, potentials, grids, wavefunctions, constants.
//! * [`classical`]: the homogeneous Lagrangian, canonical momenta, the
//!   Euler-homogeneity and constraint identities, and adaptive Runge-Kutta
//!   trajectories in either clock.
//! * [`quantum`]: Crank-Nicolson propagation of the Schrödinger equation in
//!   either clock, overlap/energy observables, the discrete wave-equation
//!   residual, and matched-clock covariance experiments.

// `!(x > 0.0)` is how NaN gets rejected alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod convergence;
pub mod error;
pub mod model;
pub mod quantum;

pub use error::{Error, Result};
pub use model::{
    eval_potential, eval_timemap, prepare_gaussian, CenterPath, ClassicalState, ClockKind,
    PhysicalConstants, PotentialSpec, SpatialGrid, TimeMap, TimeMapFamily, Wavefunction,
};
