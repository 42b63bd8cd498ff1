use num_complex::Complex64;

use super::tridiag::solve_symmetric_constant_off;
use crate::error::{Error, Result};
use crate::model::{PhysicalConstants, PotentialSpec, SpatialGrid, Wavefunction};

/// Lowest eigenvector of the discrete `H(t)` on `grid`, normalized, with a
/// positive real amplitude at its peak.
///
/// Shifted inverse iteration with the shift below `min V`, which bounds
/// the discrete spectrum from below.
pub fn discrete_ground_state(
    grid: SpatialGrid,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    t: f64,
) -> Result<Wavefunction> {
    let n = grid.len() - 2;
    let dx = grid.dx();
    let kinetic = c.hbar() * c.hbar() / (2.0 * c.mass() * dx * dx);
    let v: Vec<f64> = (1..=n).map(|j| pot.value(c.mass(), t, grid.x(j))).collect();
    let shift = v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let diag: Vec<Complex64> = v
        .iter()
        .map(|vj| Complex64::new(2.0 * kinetic + vj - shift, 0.0))
        .collect();
    let off = Complex64::new(-kinetic, 0.0);

    let mut x: Vec<Complex64> = (1..=n)
        .map(|j| {
            let u = (j as f64 - 0.5 * (n + 1) as f64) / n as f64;
            Complex64::new((-8.0 * u * u).exp(), 0.0)
        })
        .collect();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let normalize = |x: &mut [Complex64]| {
        let s = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x.iter_mut().for_each(|z| *z /= s);
    };
    normalize(&mut x);
    for _ in 0..20_000 {
        let prev = x.clone();
        solve_symmetric_constant_off(&diag, off, &mut x, &mut scratch)?;
        normalize(&mut x);
        let change = x
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change < 1e-14 {
            let peak = x
                .iter()
                .cloned()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(Complex64::new(1.0, 0.0));
            let phase = peak.conj() / peak.norm();
            let mut amps = Vec::with_capacity(n + 2);
            amps.push(Complex64::new(0.0, 0.0));
            amps.extend(x.iter().map(|z| z * phase));
            amps.push(Complex64::new(0.0, 0.0));
            return Wavefunction::new(grid, amps)?.normalized();
        }
    }
    Err(Error::Numerical(
        "inverse iteration for the ground state did not converge".into(),
    ))
}
