use super::dopri::{self, DenseSegment, Options};
use crate::error::{Error, Result};
use crate::model::{ClassicalState, ClockKind, PhysicalConstants, PotentialSpec, TimeMap};

/// Default local tolerance for trajectory integration.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Phase-space path in one clock, with a dense interpolant between samples.
#[derive(Debug, Clone)]
pub struct Trajectory {
    clock_kind: ClockKind,
    samples: Vec<ClassicalState>,
    segments: Vec<DenseSegment<2>>,
    timemap: Option<TimeMap>,
}

impl Trajectory {
    fn from_solution(
        sol: dopri::Solution<2>,
        clock_kind: ClockKind,
        timemap: Option<TimeMap>,
    ) -> Self {
        let samples = sol
            .nodes
            .iter()
            .map(|&(clock, [q, pm])| ClassicalState {
                q,
                pm,
                clock,
                clock_kind,
            })
            .collect();
        Self {
            clock_kind,
            samples,
            segments: sol.segments,
            timemap,
        }
    }

    #[inline]
    pub fn clock_kind(&self) -> ClockKind {
        self.clock_kind
    }

    #[inline]
    pub fn samples(&self) -> &[ClassicalState] {
        &self.samples
    }

    #[inline]
    pub fn timemap(&self) -> Option<&TimeMap> {
        self.timemap.as_ref()
    }

    pub fn span(&self) -> (f64, f64) {
        (
            self.samples[0].clock,
            self.samples[self.samples.len() - 1].clock,
        )
    }

    /// Conventional time of a sample: the clock itself, or `T(tau)`.
    pub fn t_equivalent(&self, sample: &ClassicalState) -> f64 {
        match &self.timemap {
            Some(map) => map.value_unchecked(sample.clock).0,
            None => sample.clock,
        }
    }

    /// Dense-output `(q, pm)` at an arbitrary clock inside the span.
    pub fn interpolate(&self, clock: f64) -> Result<(f64, f64)> {
        let (a, b) = self.span();
        if !(clock >= a && clock <= b) {
            return Err(Error::validation(
                "clock",
                format!("clock {clock} outside trajectory span [{a}, {b}]"),
            ));
        }
        let idx = self
            .segments
            .partition_point(|s| s.t0 <= clock)
            .saturating_sub(1);
        let [q, pm] = self.segments[idx].eval(clock);
        Ok((q, pm))
    }
}

fn check_span(span: (f64, f64), tol: f64) -> Result<()> {
    if !(span.0.is_finite() && span.1.is_finite() && span.1 > span.0) {
        return Err(Error::validation(
            "span",
            format!("need a nonempty span, got [{}, {}]", span.0, span.1),
        ));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::validation("tol", format!("must be > 0, got {tol}")));
    }
    Ok(())
}

/// Hamilton's equations `x' = p/m`, `p' = -dV/dx` in conventional time.
pub fn integrate_t(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    x0: f64,
    p0: f64,
    t_span: (f64, f64),
    tol: f64,
) -> Result<Trajectory> {
    check_span(t_span, tol)?;
    let m = c.mass();
    let sol = dopri::integrate(
        |t, y: &[f64; 2]| Ok([y[1] / m, -pot.gradient(m, t, y[0])]),
        t_span.0,
        t_span.1,
        [x0, p0],
        &Options::with_tol(tol),
    )?;
    Ok(Trajectory::from_solution(
        sol,
        ClockKind::ConventionalT,
        None,
    ))
}

/// Hamilton's equations generated by `H~ = T' H`:
/// `xi' = T' pi / m`, `pi' = -T' dV/dx(T(tau), xi)`.
pub fn integrate_tau(
    pot: &PotentialSpec,
    c: &PhysicalConstants,
    map: &TimeMap,
    xi0: f64,
    pi0: f64,
    tau_span: (f64, f64),
    tol: f64,
) -> Result<Trajectory> {
    check_span(tau_span, tol)?;
    if !(map.contains(tau_span.0) && map.contains(tau_span.1)) {
        let (a, b) = map.domain();
        return Err(Error::domain(format!(
            "tau span [{}, {}] not inside map domain [{a}, {b}]",
            tau_span.0, tau_span.1
        )));
    }
    let m = c.mass();
    let sol = dopri::integrate(
        |tau, y: &[f64; 2]| {
            let (t, rate) = map.eval(tau)?;
            Ok([rate * (y[1] / m), -rate * pot.gradient(m, t, y[0])])
        },
        tau_span.0,
        tau_span.1,
        [xi0, pi0],
        &Options::with_tol(tol),
    )?;
    Ok(Trajectory::from_solution(
        sol,
        ClockKind::ParameterTau,
        Some(*map),
    ))
}

/// `max_k |xi(tau_k) - x(T(tau_k))|` over the samples of `traj_tau`, with
/// `x` read from the dense output of `traj_t`.
pub fn trajectory_equivalence(
    traj_t: &Trajectory,
    traj_tau: &Trajectory,
    map: &TimeMap,
) -> Result<f64> {
    let (ta, tb) = traj_t.span();
    let (tau_a, tau_b) = traj_tau.span();
    let need = (map.eval(tau_a)?.0, map.eval(tau_b)?.0);
    let slack = 8.0 * f64::EPSILON * need.0.abs().max(need.1.abs()).max(1.0);
    if need.0 < ta - slack || need.1 > tb + slack {
        return Err(Error::validation(
            "traj_t",
            format!(
                "reference covers [{ta}, {tb}] but T(tau) spans [{}, {}]",
                need.0, need.1
            ),
        ));
    }
    traj_tau.samples().iter().try_fold(0.0f64, |acc, s| {
        let t = map.eval(s.clock)?.0.clamp(ta, tb);
        let (x, _) = traj_t.interpolate(t)?;
        Ok(acc.max((s.q - x).abs()))
    })
}
