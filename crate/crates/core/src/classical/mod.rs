//! Homogeneous formalism for `L = m xdot^2 / 2 - V(t, x)` and trajectory
//! integration in either clock.

pub mod dopri;
mod lagrangian;
mod trajectory;

pub use lagrangian::{
    check_constraint, check_euler_homogeneity, check_euler_homogeneity_with_step,
    constraint_residual, hamiltonian_t, hamiltonian_tau, homogeneous_lagrangian, lagrangian_t,
    momenta_tau, velocity_partials_fd, LagrangianPoint, FD_STEP,
};
pub use trajectory::{integrate_t, integrate_tau, trajectory_equivalence, Trajectory, DEFAULT_TOL};
