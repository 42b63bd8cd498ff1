//! Matched-clock comparison of a relabeled run against conventional time.

use serde::{Deserialize, Serialize};

use super::operator::{fidelity, phase_distance};
use super::propagate::{
    node, propagate_tau, step_count, CrankNicolson, EvolutionRecord, PropagatorConfig,
};
use crate::error::{Error, Result};
use crate::model::{ClockKind, PhysicalConstants, PotentialSpec, TimeMap, Wavefunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSample {
    pub tau: f64,
    pub t: f64,
    /// `|<psi(T(tau))|phi(tau)>|`.
    pub fidelity: f64,
    pub norm_psi: f64,
    pub norm_phi: f64,
    /// `<H(t)>` on the conventional-time state.
    pub energy_t: f64,
    /// `<T' H(T)>` on the relabeled state.
    pub energy_tau: f64,
    #[serde(rename = "Tprime")]
    pub t_rate: f64,
    /// `|energy_tau - T' energy_t|`.
    pub energy_transform_residual: f64,
    /// Phase-optimal L2 distance between the two states.
    pub phase_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSummary {
    pub min_fidelity: f64,
    pub max_phase_distance: f64,
    pub max_energy_transform_residual: f64,
    pub max_norm_drift: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub samples: Vec<CovarianceSample>,
    pub summary: CovarianceSummary,
    pub flags: Vec<String>,
}

impl CovarianceReport {
    pub fn from_samples(samples: Vec<CovarianceSample>, flags: Vec<String>) -> Self {
        let mut s = CovarianceSummary {
            min_fidelity: 1.0,
            max_phase_distance: 0.0,
            max_energy_transform_residual: 0.0,
            max_norm_drift: 0.0,
            flagged: !flags.is_empty(),
        };
        if let Some(first) = samples.first() {
            for x in &samples {
                s.min_fidelity = s.min_fidelity.min(x.fidelity);
                s.max_phase_distance = s.max_phase_distance.max(x.phase_distance);
                s.max_energy_transform_residual = s
                    .max_energy_transform_residual
                    .max(x.energy_transform_residual);
                s.max_norm_drift = s
                    .max_norm_drift
                    .max((x.norm_psi - first.norm_psi).abs())
                    .max((x.norm_phi - first.norm_phi).abs());
            }
        }
        Self {
            samples,
            summary: s,
            flags,
        }
    }
}

/// Everything needed for one covariance run.
#[derive(Debug, Clone)]
pub struct CovarianceSetup {
    pub constants: PhysicalConstants,
    pub potential: PotentialSpec,
    pub map: TimeMap,
    pub initial: Wavefunction,
    pub tau_span: (f64, f64),
    /// Stepping of the relabeled run (in tau).
    pub config: PropagatorConfig,
    /// Nominal step of the conventional-time reference; defaults to `config.dt()`.
    pub reference_dt: Option<f64>,
    /// Declared reference interval; must cover `[T(tau0), T(tau1)]` when given.
    pub reference_span: Option<(f64, f64)>,
}

/// Propagates in both clocks from the same state and compares them at
/// every recorded `tau_k`, the reference landing exactly on `T(tau_k)`.
pub fn covariance_experiment(setup: &CovarianceSetup) -> Result<CovarianceReport> {
    let (t0, t1) = (
        setup.map.eval(setup.tau_span.0)?.0,
        setup.map.eval(setup.tau_span.1)?.0,
    );
    if let Some((a, b)) = setup.reference_span {
        let slack = 8.0 * f64::EPSILON * t0.abs().max(t1.abs()).max(1.0);
        if a > t0 + slack || b < t1 - slack {
            return Err(Error::validation(
                "reference_span",
                format!("[{a}, {b}] does not cover T(tau) range [{t0}, {t1}]"),
            ));
        }
    }
    let relabeled = propagate_tau(
        &setup.initial,
        &setup.potential,
        &setup.constants,
        &setup.map,
        setup.tau_span,
        &setup.config,
    )?;
    compare_to_reference(
        &relabeled,
        &setup.initial,
        &setup.potential,
        &setup.constants,
        setup.reference_dt.unwrap_or(setup.config.dt()),
        setup.config.edge_guard(),
    )
}

/// Runs conventional-time Crank-Nicolson from `psi0`, landing exactly on
/// each snapshot's `t_equivalent`, and compares states and energies.
pub fn compare_to_reference(
    record: &EvolutionRecord,
    psi0: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    reference_dt: f64,
    edge_guard: f64,
) -> Result<CovarianceReport> {
    if !(reference_dt.is_finite() && reference_dt > 0.0) {
        return Err(Error::validation(
            "reference_dt",
            format!("must be > 0, got {reference_dt}"),
        ));
    }
    let snaps = record.snapshots();
    let Some(first) = snaps.first() else {
        return Ok(CovarianceReport::from_samples(Vec::new(), Vec::new()));
    };
    let mut reference = EvolutionRecord::new(ClockKind::ConventionalT, None, edge_guard);
    let mut kernel = CrankNicolson::new(*psi0.grid(), *pot, c);
    let mut amps = psi0.amplitudes().to_vec();
    let mut now = first.t_equivalent;
    let mut samples = Vec::with_capacity(snaps.len());

    for snap in snaps {
        let target = snap.t_equivalent;
        if target < now {
            return Err(Error::validation(
                "record",
                format!("relabeled clock is not monotone in t near t = {target}"),
            ));
        }
        if target > now {
            let steps = step_count(target - now, reference_dt);
            let mut prev = now;
            for n in 1..=steps {
                let next = node(now, target, reference_dt, n, steps);
                kernel.step(&mut amps, 0.5 * (prev + next), 1.0, next - prev)?;
                prev = next;
            }
            now = target;
        }
        let psi = Wavefunction::from_parts_unchecked(*psi0.grid(), amps.clone());
        reference.push(target, psi, pot, c)?;
        let ref_snap = reference.snapshots().last().expect("just pushed");

        let (_, rate) = record.clock_rate(snap.clock)?;
        samples.push(CovarianceSample {
            tau: snap.clock,
            t: target,
            fidelity: fidelity(&ref_snap.psi, &snap.psi)?,
            norm_psi: ref_snap.norm,
            norm_phi: snap.norm,
            energy_t: ref_snap.energy,
            energy_tau: snap.energy,
            t_rate: rate,
            energy_transform_residual: (snap.energy - rate * ref_snap.energy).abs(),
            phase_distance: phase_distance(&ref_snap.psi, &snap.psi)?,
        });
    }

    let flags = reference
        .flags()
        .iter()
        .map(|f| format!("reference: {f}"))
        .chain(record.flags().iter().map(|f| format!("relabeled: {f}")))
        .collect();
    Ok(CovarianceReport::from_samples(samples, flags))
}
