//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use relabel_core::{prepare_gaussian, PhysicalConstants, PotentialSpec, SpatialGrid, Wavefunction};

pub fn box_grid(n: usize) -> SpatialGrid {
    SpatialGrid::new(-12.0, 12.0, n).expect("valid grid")
}

/// Displaced ground-state Gaussian on `[-12, 12]` with `n` points.
pub fn coherent(n: usize) -> Wavefunction {
    prepare_gaussian(box_grid(n), 1.0, 1.0, 0.0, &PhysicalConstants::default())
        .expect("packet fits")
}

pub fn driven() -> PotentialSpec {
    PotentialSpec::DrivenHarmonic {
        omega0: 1.0,
        rate: 0.1,
    }
}

/// A diagonally dominant system like the Crank-Nicolson left-hand side.
pub fn cn_like_system(n: usize) -> (Vec<Complex64>, Complex64, Vec<Complex64>) {
    let diag = (0..n)
        .map(|j| Complex64::new(1.0, 0.5 + 1e-3 * j as f64))
        .collect();
    let off = Complex64::new(0.0, -0.2);
    let rhs = (0..n)
        .map(|j| Complex64::new((j as f64 * 0.1).sin(), (j as f64 * 0.07).cos()))
        .collect();
    (diag, off, rhs)
}
