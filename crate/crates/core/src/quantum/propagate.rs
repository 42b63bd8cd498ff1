//! Crank-Nicolson propagation in conventional time and in a relabeled clock.
//!
//! Every propagator here funnels through [`CrankNicolson::step`] with a
//! step Hamiltonian `scale * H(t_eval)`: `(t_mid, 1)` for conventional time,
//! `(T(tau_mid), T'(tau_mid))` for a relabeled clock.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::apply_scaled;
use super::tridiag::solve_symmetric_constant_off;
use crate::error::{Error, Result};
use crate::model::{
    ClockKind, PhysicalConstants, PotentialSpec, SpatialGrid, TimeMap, Wavefunction,
};

/// Maximum allowed drift of a snapshot norm from the initial norm.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;
/// Maximum probability allowed inside the edge guard.
pub const EDGE_MASS_LIMIT: f64 = 1e-8;
/// Default fraction of the box watched for boundary leakage.
pub const DEFAULT_EDGE_GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Scheme {
    #[default]
    CrankNicolson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    dt: f64,
    scheme: Scheme,
    record_every: usize,
    edge_guard: f64,
}

impl PropagatorConfig {
    pub fn new(dt: f64, record_every: usize) -> Result<Self> {
        Self::with_edge_guard(dt, record_every, DEFAULT_EDGE_GUARD)
    }

    pub fn with_edge_guard(dt: f64, record_every: usize, edge_guard: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::validation("dt", format!("must be > 0, got {dt}")));
        }
        if record_every == 0 {
            return Err(Error::validation("record_every", "must be >= 1"));
        }
        if !(edge_guard > 0.0 && edge_guard < 1.0) {
            return Err(Error::validation(
                "edge_guard",
                format!("must lie in (0, 1), got {edge_guard}"),
            ));
        }
        Ok(Self {
            dt,
            scheme: Scheme::CrankNicolson,
            record_every,
            edge_guard,
        })
    }

    #[inline]
    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    #[inline]
    pub fn record_every(&self) -> usize {
        self.record_every
    }

    #[inline]
    pub fn edge_guard(&self) -> f64 {
        self.edge_guard
    }
}

/// Number of steps of nominal size `dt` covering `span`; the last step is
/// shortened rather than adding a sliver step.
pub(crate) fn step_count(span: f64, dt: f64) -> usize {
    ((span / dt - 1e-9).ceil() as usize).max(1)
}

/// Node `n` of `steps` uniform steps on `[a, b]`; the final node is `b` exactly.
#[inline]
pub(crate) fn node(a: f64, b: f64, dt: f64, n: usize, steps: usize) -> f64 {
    if n >= steps {
        b
    } else {
        a + n as f64 * dt
    }
}

/// Reusable Crank-Nicolson kernel for one grid and potential.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    grid: SpatialGrid,
    pot: PotentialSpec,
    hbar: f64,
    mass: f64,
    kinetic: f64,
    interior_x: Vec<f64>,
    potential: Vec<f64>,
    potential_at: Option<f64>,
    diag: Vec<Complex64>,
    rhs: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl CrankNicolson {
    pub fn new(grid: SpatialGrid, pot: PotentialSpec, c: &PhysicalConstants) -> Self {
        let n = grid.len() - 2;
        let dx = grid.dx();
        let zero = Complex64::new(0.0, 0.0);
        Self {
            grid,
            pot,
            hbar: c.hbar(),
            mass: c.mass(),
            kinetic: c.hbar() * c.hbar() / (2.0 * c.mass() * dx * dx),
            interior_x: (1..=n).map(|j| grid.x(j)).collect(),
            potential: vec![0.0; n],
            potential_at: None,
            diag: vec![zero; n],
            rhs: vec![zero; n],
            scratch: vec![zero; n],
        }
    }

    fn refresh_potential(&mut self, t: f64) {
        let fresh = match self.potential_at {
            Some(prev) => prev == t || self.pot.is_static(),
            None => false,
        };
        if !fresh {
            for (v, &x) in self.potential.iter_mut().zip(&self.interior_x) {
                *v = self.pot.value(self.mass, t, x);
            }
            self.potential_at = Some(t);
        }
    }

    /// Advances `amps` (full grid, zero boundary) by `dt` under
    /// `scale * H(t_eval)`.
    pub fn step(&mut self, amps: &mut [Complex64], t_eval: f64, scale: f64, dt: f64) -> Result<()> {
        debug_assert_eq!(amps.len(), self.grid.len());
        self.refresh_potential(t_eval);
        let beta = Complex64::new(0.0, scale * dt / (2.0 * self.hbar));
        let one = Complex64::new(1.0, 0.0);
        let k = self.kinetic;
        let n = self.potential.len();
        for j in 0..n {
            let h_diag = 2.0 * k + self.potential[j];
            let h_psi = h_diag * amps[j + 1] - k * (amps[j] + amps[j + 2]);
            self.rhs[j] = amps[j + 1] - beta * h_psi;
            self.diag[j] = one + beta * h_diag;
        }
        let off = -beta * k;
        solve_symmetric_constant_off(&self.diag, off, &mut self.rhs, &mut self.scratch)?;
        amps[1..=n].copy_from_slice(&self.rhs);
        Ok(())
    }
}

/// One recorded state.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub clock: f64,
    /// `T(clock)` for relabeled records, otherwise the clock itself.
    pub t_equivalent: f64,
    pub psi: Wavefunction,
    pub norm: f64,
    /// Expectation of the generator of this record's clock
    /// (`H`, or `T' H` for relabeled records).
    pub energy: f64,
    pub edge_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RecordFlag {
    NormDrift { clock: f64, drift: f64 },
    EdgeLeak { clock: f64, mass: f64 },
}

impl std::fmt::Display for RecordFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecordFlag::NormDrift { clock, drift } => {
                write!(f, "norm drift {drift:e} at clock {clock}")
            }
            RecordFlag::EdgeLeak { clock, mass } => {
                write!(f, "edge-guard mass {mass:e} at clock {clock}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionRecord {
    clock_kind: ClockKind,
    snapshots: Vec<Snapshot>,
    timemap: Option<TimeMap>,
    flags: Vec<RecordFlag>,
    edge_guard: f64,
}

impl EvolutionRecord {
    pub(crate) fn new(clock_kind: ClockKind, timemap: Option<TimeMap>, edge_guard: f64) -> Self {
        Self {
            clock_kind,
            snapshots: Vec::new(),
            timemap,
            flags: Vec::new(),
            edge_guard,
        }
    }

    #[inline]
    pub fn clock_kind(&self) -> ClockKind {
        self.clock_kind
    }

    #[inline]
    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    #[inline]
    pub fn timemap(&self) -> Option<&TimeMap> {
        self.timemap.as_ref()
    }

    #[inline]
    pub fn flags(&self) -> &[RecordFlag] {
        &self.flags
    }

    /// False once the unitarity or edge-guard monitor has fired.
    pub fn is_valid(&self) -> bool {
        self.flags.is_empty()
    }

    /// `(T, T')` of this record's clock at `clock`.
    pub fn clock_rate(&self, clock: f64) -> Result<(f64, f64)> {
        match &self.timemap {
            Some(map) => map.eval(clock),
            None => Ok((clock, 1.0)),
        }
    }

    /// Appends a snapshot, running the unitarity and edge-guard monitors.
    pub(crate) fn push(
        &mut self,
        clock: f64,
        psi: Wavefunction,
        pot: &PotentialSpec,
        c: &PhysicalConstants,
    ) -> Result<()> {
        if !psi.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite amplitude at clock {clock}"
            )));
        }
        let (t, rate) = self.clock_rate(clock)?;
        let norm = psi.norm();
        let h = apply_scaled(&psi, pot, c, t, rate);
        let energy = psi.inner(&h)?.re;
        let edge_mass = psi.edge_mass(self.edge_guard);
        if let Some(first) = self.snapshots.first() {
            let drift = (norm - first.norm).abs();
            if drift > NORM_DRIFT_LIMIT {
                self.flags.push(RecordFlag::NormDrift { clock, drift });
            }
        }
        if edge_mass >= EDGE_MASS_LIMIT {
            self.flags.push(RecordFlag::EdgeLeak {
                clock,
                mass: edge_mass,
            });
        }
        self.snapshots.push(Snapshot {
            clock,
            t_equivalent: t,
            psi,
            norm,
            energy,
            edge_mass,
        });
        Ok(())
    }
}

fn check_initial(psi: &Wavefunction) -> Result<()> {
    if !psi.is_finite() {
        return Err(Error::validation("psi0", "non-finite amplitudes"));
    }
    let n = psi.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::validation(
            "psi0",
            format!("must be normalized, norm = {n}"),
        ));
    }
    Ok(())
}

fn check_span(span: (f64, f64)) -> Result<()> {
    if !(span.0.is_finite() && span.1.is_finite() && span.1 > span.0) {
        return Err(Error::validation(
            "span",
            format!("need a nonempty span, got [{}, {}]", span.0, span.1),
        ));
    }
    Ok(())
}

fn propagate_clock(
    psi0: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    span: (f64, f64),
    cfg: &PropagatorConfig,
    clock_kind: ClockKind,
    timemap: Option<TimeMap>,
) -> Result<EvolutionRecord> {
    check_initial(psi0)?;
    check_span(span)?;
    let (a, b) = span;
    let dt = cfg.dt();
    let steps = step_count(b - a, dt);
    let mut kernel = CrankNicolson::new(*psi0.grid(), *pot, c);
    let mut record = EvolutionRecord::new(clock_kind, timemap, cfg.edge_guard());
    let mut amps = psi0.amplitudes().to_vec();
    record.push(a, psi0.clone(), pot, c)?;
    let mut prev = a;
    for n in 1..=steps {
        let next = node(a, b, dt, n, steps);
        let mid = 0.5 * (prev + next);
        let (t_eval, scale) = record.clock_rate(mid)?;
        kernel.step(&mut amps, t_eval, scale, next - prev)?;
        if n % cfg.record_every() == 0 || n == steps {
            let psi = Wavefunction::from_parts_unchecked(*psi0.grid(), amps.clone());
            record.push(next, psi, pot, c)?;
        }
        prev = next;
    }
    Ok(record)
}

/// Crank-Nicolson in conventional time with the midpoint Hamiltonian.
pub fn propagate_t(
    psi0: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    t_span: (f64, f64),
    cfg: &PropagatorConfig,
) -> Result<EvolutionRecord> {
    propagate_clock(psi0, pot, c, t_span, cfg, ClockKind::ConventionalT, None)
}

/// Crank-Nicolson in the relabeled clock with step Hamiltonian
/// `T'(tau_mid) H(T(tau_mid))`.
pub fn propagate_tau(
    phi0: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    map: &TimeMap,
    tau_span: (f64, f64),
    cfg: &PropagatorConfig,
) -> Result<EvolutionRecord> {
    if !(map.contains(tau_span.0) && map.contains(tau_span.1)) {
        let (lo, hi) = map.domain();
        return Err(Error::domain(format!(
            "tau span [{}, {}] not inside map domain [{lo}, {hi}]",
            tau_span.0, tau_span.1
        )));
    }
    propagate_clock(
        phi0,
        pot,
        c,
        tau_span,
        cfg,
        ClockKind::ParameterTau,
        Some(*map),
    )
}

/// Propagation under `H_alpha(t) = alpha H(alpha t)`, i.e. the relabeled
/// clock `T(s) = alpha s` on `t_span`. Snapshot clocks are the compressed
/// clock `s`; `t_equivalent` is `alpha s`.
pub fn propagate_rescaled(
    psi0: &Wavefunction,
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    alpha: f64,
    t_span: (f64, f64),
    cfg: &PropagatorConfig,
) -> Result<EvolutionRecord> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::validation(
            "alpha",
            format!("must be > 0, got {alpha}"),
        ));
    }
    check_span(t_span)?;
    let map = rescaling_map(alpha, t_span)?;
    propagate_tau(psi0, pot, c, &map, t_span, cfg)
}

/// The time map `T(s) = alpha s` behind [`propagate_rescaled`].
pub fn rescaling_map(alpha: f64, span: (f64, f64)) -> Result<TimeMap> {
    TimeMap::linear(1.0 / alpha, span.0, span.1)
}
