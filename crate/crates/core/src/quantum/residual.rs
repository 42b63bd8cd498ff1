use num_complex::Complex64;

use super::operator::apply_scaled;
use super::propagate::EvolutionRecord;
use crate::error::{Error, Result};
use crate::model::{PhysicalConstants, PotentialSpec};

/// Normalized residual of the wave equation
/// `i hbar d psi / d clock = H_eff psi` on a recorded run.
///
/// The clock derivative is the centered difference over each triple of
/// consecutive, equally spaced snapshots; `H_eff` carries the `T'` factor for
/// relabeled records. The maximum pointwise residual is divided by the
/// maximum of `|H_eff psi|` over the same snapshots.
pub fn residual_check(
    record: &EvolutionRecord,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
) -> Result<f64> {
    let snaps = record.snapshots();
    if snaps.len() < 3 {
        return Err(Error::validation(
            "record",
            format!("residual check needs >= 3 snapshots, got {}", snaps.len()),
        ));
    }
    let i_hbar = Complex64::new(0.0, c.hbar());
    let mut max_res = 0.0f64;
    let mut max_h = 0.0f64;
    let mut triples = 0usize;
    for w in snaps.windows(3) {
        let (h0, h1) = (w[1].clock - w[0].clock, w[2].clock - w[1].clock);
        if (h0 - h1).abs() > 1e-9 * h0.abs().max(h1.abs()) {
            continue;
        }
        triples += 1;
        let two_dt = w[2].clock - w[0].clock;
        let (t, rate) = record.clock_rate(w[1].clock)?;
        let h_psi = apply_scaled(&w[1].psi, pot, c, t, rate);
        for (j, hp) in h_psi.amplitudes().iter().enumerate() {
            let d = (w[2].psi.amplitudes()[j] - w[0].psi.amplitudes()[j]) / two_dt;
            max_res = max_res.max((i_hbar * d - hp).norm());
            max_h = max_h.max(hp.norm());
        }
    }
    if triples == 0 {
        return Err(Error::validation(
            "record",
            "no equally spaced snapshot triples; record with record_every = 1",
        ));
    }
    if max_h == 0.0 {
        return Ok(max_res);
    }
    Ok(max_res / max_h)
}
