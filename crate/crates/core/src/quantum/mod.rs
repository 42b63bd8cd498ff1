//! Schrödinger propagation in conventional and relabeled clocks.

mod covariance;
mod operator;
mod propagate;
mod residual;
mod stationary;
pub mod tridiag;

pub use covariance::{
    compare_to_reference, covariance_experiment, CovarianceReport, CovarianceSample,
    CovarianceSetup, CovarianceSummary,
};
pub use operator::{
    apply_hamiltonian, expectation_energy, fidelity, hamiltonian_matrix_element, phase_distance,
};
pub use propagate::{
    propagate_rescaled, propagate_t, propagate_tau, rescaling_map, CrankNicolson, EvolutionRecord,
    PropagatorConfig, RecordFlag, Scheme, Snapshot, DEFAULT_EDGE_GUARD, EDGE_MASS_LIMIT,
    NORM_DRIFT_LIMIT,
};
pub use residual::residual_check;
pub use stationary::discrete_ground_state;
