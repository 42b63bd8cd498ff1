//! Shared domain types: clocks, potentials, grids and states.

mod constants;
mod grid;
mod potential;
mod state;
mod timemap;

pub use constants::PhysicalConstants;
pub use grid::{prepare_gaussian, SpatialGrid, Wavefunction};
pub use potential::{eval_potential, CenterPath, PotentialSpec};
pub use state::{ClassicalState, ClockKind};
pub use timemap::{eval_timemap, TimeMap, TimeMapFamily, MIN_RATE, MONOTONE_SAMPLES};
