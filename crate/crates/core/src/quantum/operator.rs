//! Discrete Hamiltonian and the observables built on it.

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{PhysicalConstants, PotentialSpec, Wavefunction};

/// `scale * ((-hbar^2 / 2m) D2 psi + V(t, x) psi)` with the three-point
/// Laplacian; boundary entries stay zero.
pub(crate) fn apply_scaled(
    psi: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    t: f64,
    scale: f64,
) -> Wavefunction {
    let grid = *psi.grid();
    let a = psi.amplitudes();
    let n = a.len();
    let dx = grid.dx();
    let kinetic = c.hbar() * c.hbar() / (2.0 * c.mass() * dx * dx);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 1..n - 1 {
        let v = pot.value(c.mass(), t, grid.x(j));
        let h = (2.0 * kinetic + v) * a[j] - kinetic * (a[j - 1] + a[j + 1]);
        out[j] = h * scale;
    }
    Wavefunction::from_parts_unchecked(grid, out)
}

/// `H(t) psi`, unnormalized.
pub fn apply_hamiltonian(
    psi: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    t: f64,
) -> Result<Wavefunction> {
    if !psi.is_finite() {
        return Err(crate::Error::validation("psi", "non-finite amplitudes"));
    }
    Ok(apply_scaled(psi, pot, c, t, 1.0))
}

/// Full complex `<psi|H(t)|psi>`; the imaginary part is a Hermiticity probe.
pub fn hamiltonian_matrix_element(
    psi: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    t: f64,
) -> Result<Complex64> {
    let h = apply_hamiltonian(psi, pot, c, t)?;
    psi.inner(&h)
}

/// `Re <psi|H(t)|psi>`.
pub fn expectation_energy(
    psi: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    t: f64,
) -> Result<f64> {
    Ok(hamiltonian_matrix_element(psi, pot, c, t)?.re)
}

/// `|<a|b>|`; blind to a global phase on either argument.
pub fn fidelity(a: &Wavefunction, b: &Wavefunction) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}

/// `min over theta of ||b - e^{i theta} a||`, evaluated without the
/// cancellation in `sqrt(2 - 2 |<a|b>|)`.
pub fn phase_distance(a: &Wavefunction, b: &Wavefunction) -> Result<f64> {
    let overlap = a.inner(b)?;
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let sum: f64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (y - phase * x).norm_sqr())
        .sum();
    Ok((sum * a.grid().dx()).sqrt())
}
