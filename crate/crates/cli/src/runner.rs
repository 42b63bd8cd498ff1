//! Scenario execution, pass/fail judgement and artifact writing.

use std::path::{Path, PathBuf};
use std::time::Instant;

use relabel_core::classical::{integrate_t, integrate_tau, trajectory_equivalence, Trajectory};
use relabel_core::convergence::loglog_order;
use relabel_core::quantum::{
    compare_to_reference, propagate_tau, CovarianceReport, EvolutionRecord, PropagatorConfig,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::report::{self, csv_table, to_json, write_file};
use crate::scenario::{OutputFormat, Scenario, ScenarioKind, Setup, Sweep, Tolerances};

/// Order band used by `sweep` when the scenario declares none.
pub const DEFAULT_DT_ORDER: [f64; 2] = [1.8, 2.2];
/// Dormand-Prince is fifth order in its mean step.
pub const DEFAULT_TOL_ORDER: [f64; 2] = [4.0, 6.0];

/// Bound applied to every error tolerance by [`ToleranceProfile::Strict`].
pub const STRICT_BOUND: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceProfile {
    /// The tolerances declared in the scenario file.
    Baseline,
    /// Every declared error bound replaced by 1e-14, below what the
    /// discretizations reach. Order bands are left alone.
    Strict,
}

impl ToleranceProfile {
    pub fn apply(self, t: &Tolerances) -> Tolerances {
        match self {
            ToleranceProfile::Baseline => *t,
            ToleranceProfile::Strict => Tolerances {
                fidelity_loss: t.fidelity_loss.map(|_| STRICT_BOUND),
                energy_transform: t.energy_transform.map(|_| STRICT_BOUND),
                trajectory_error: t.trajectory_error.map(|_| STRICT_BOUND),
                order: t.order,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flagged => "FLAGGED",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Metrics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_phase_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_energy_transform_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_norm_drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_trajectory_error: Option<f64>,
    /// Log-log order of the headline error in the swept step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_order: Option<f64>,
    /// Log-log order of the energy-transform residual in `dt`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_transform_order: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub kind: ScenarioKind,
    pub status: Status,
    pub metrics: Metrics,
    pub profile: ToleranceProfile,
    pub tolerances: Tolerances,
    /// Edge-guard and unitarity monitor messages.
    pub flags: Vec<String>,
    /// One line per tolerance that was not met.
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl RunSummary {
    /// Single-line console form.
    pub fn line(&self) -> String {
        let m = &self.metrics;
        let mut parts = Vec::new();
        if let Some(v) = m.min_fidelity {
            parts.push(format!("1-min_fidelity={:.3e}", 1.0 - v));
        }
        if let Some(v) = m.max_energy_transform_residual {
            parts.push(format!("energy_residual={v:.3e}"));
        }
        if let Some(v) = m.max_trajectory_error {
            parts.push(format!("trajectory_error={v:.3e}"));
        }
        if let Some(v) = m.convergence_order {
            parts.push(format!("order={v:.3}"));
        }
        let mut s = format!(
            "{:<8}{}  {}  ({:.2} s)",
            self.status,
            self.name,
            parts.join(" "),
            self.wall_time_s
        );
        for f in self.failures.iter().chain(&self.flags) {
            s.push_str(&format!("\n        {f}"));
        }
        if let Some(e) = &self.error {
            s.push_str(&format!("\n        error: {e}"));
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Overrides the scenario's `[outputs] format` when set.
    pub format: Option<OutputFormat>,
    pub profile: ToleranceProfile,
}

/// 0 = all Pass; 1 = any Fail; 3 = Flagged without failures.
/// (2 is reserved for usage and parse errors, decided before any run.)
pub fn exit_code(summaries: &[RunSummary]) -> i32 {
    if summaries.iter().any(|s| s.status == Status::Fail) {
        1
    } else if summaries.iter().any(|s| s.status == Status::Flagged) {
        3
    } else {
        0
    }
}

struct Outcome {
    metrics: Metrics,
    flags: Vec<String>,
    failures: Vec<String>,
    artifacts: Vec<(String, String)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            metrics: Metrics::default(),
            flags: Vec::new(),
            failures: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    fn check_max(&mut self, what: &str, value: f64, bound: Option<f64>) {
        if let Some(b) = bound {
            if !(value <= b) {
                self.failures
                    .push(format!("{what} = {value:e} exceeds {b:e}"));
            }
        }
    }

    fn check_band(&mut self, what: &str, value: f64, band: [f64; 2]) {
        if !(band[0] <= value && value <= band[1]) {
            self.failures.push(format!(
                "{what} = {value:.4} outside [{}, {}]",
                band[0], band[1]
            ));
        }
    }

    fn add_covariance(&mut self, stem: &str, report: &CovarianceReport, format: OutputFormat) {
        if format.csv() {
            self.artifacts
                .push((format!("{stem}.csv"), report::covariance_csv(report)));
        }
        if format.json() {
            self.artifacts
                .push((format!("{stem}.json"), report::covariance_json(report)));
        }
    }
}

/// Runs the experiment declared by the scenario's kind.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> RunSummary {
    run_with(
        s,
        opts,
        s.kind == ScenarioKind::ConvergenceSweep,
        "summary.json",
    )
}

/// Runs a convergence sweep on any scenario, using the declared `[sweep]`
/// values or the defaults for its setup.
pub fn run_sweep(s: &Scenario, opts: &RunOptions) -> RunSummary {
    run_with(s, opts, true, "sweep_summary.json")
}

fn run_with(s: &Scenario, opts: &RunOptions, sweep: bool, summary_file: &str) -> RunSummary {
    let start = Instant::now();
    let tolerances = opts.profile.apply(&s.tolerances);
    let format = opts.format.unwrap_or(s.format);
    let result = if sweep {
        execute_sweep(s, &tolerances, format)
    } else {
        match s.kind {
            ScenarioKind::QuantumCovariance => execute_covariance(s, &tolerances, format),
            ScenarioKind::ClassicalEquivalence => execute_classical(s, &tolerances, format),
            ScenarioKind::ConvergenceSweep => unreachable!("dispatched to the sweep"),
        }
    };
    let dir = opts.out_dir.join(&s.subdir);
    let result = result.and_then(|o| {
        write_artifacts(&dir, &o.artifacts)?;
        Ok(o)
    });
    let mut summary = match result {
        Ok(o) => RunSummary {
            name: s.name.clone(),
            kind: s.kind,
            status: if !o.failures.is_empty() {
                Status::Fail
            } else if !o.flags.is_empty() {
                Status::Flagged
            } else {
                Status::Pass
            },
            metrics: o.metrics,
            profile: opts.profile,
            tolerances,
            flags: o.flags,
            failures: o.failures,
            error: None,
            wall_time_s: 0.0,
        },
        Err(e) => RunSummary {
            name: s.name.clone(),
            kind: s.kind,
            status: Status::Fail,
            metrics: Metrics::default(),
            profile: opts.profile,
            tolerances,
            flags: Vec::new(),
            failures: Vec::new(),
            error: Some(e.to_string()),
            wall_time_s: 0.0,
        },
    };
    summary.wall_time_s = start.elapsed().as_secs_f64();
    if let Err(e) = std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::io(&dir, e))
        .and_then(|_| write_file(&dir.join(summary_file), &to_json(&summary)))
    {
        summary.status = Status::Fail;
        summary.error.get_or_insert(e.to_string());
    }
    summary
}

fn write_artifacts(dir: &Path, artifacts: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, body) in artifacts {
        write_file(&dir.join(name), body)?;
    }
    Ok(())
}

fn quantum_parts(s: &Scenario) -> (&relabel_core::Wavefunction, &PropagatorConfig, Option<f64>) {
    match &s.setup {
        Setup::Quantum {
            initial,
            config,
            reference_dt,
            ..
        } => (initial, config, *reference_dt),
        Setup::Classical { .. } => unreachable!("validated: quantum kind has a quantum setup"),
    }
}

fn covariance_run(
    s: &Scenario,
    config: &PropagatorConfig,
    reference_dt: Option<f64>,
) -> relabel_core::Result<(EvolutionRecord, CovarianceReport)> {
    let (initial, _, _) = quantum_parts(s);
    let record = propagate_tau(
        initial,
        &s.potential,
        &s.constants,
        &s.map,
        s.tau_span,
        config,
    )?;
    let report = compare_to_reference(
        &record,
        initial,
        &s.potential,
        &s.constants,
        reference_dt.unwrap_or(config.dt()),
        config.edge_guard(),
    )?;
    Ok((record, report))
}

fn core_err(s: &Scenario) -> impl Fn(relabel_core::Error) -> CliError + '_ {
    move |source| CliError::Invalid {
        origin: s.name.clone(),
        section: "run",
        source,
    }
}

fn execute_covariance(s: &Scenario, tol: &Tolerances, format: OutputFormat) -> Result<Outcome> {
    let (_, config, reference_dt) = quantum_parts(s);
    let (record, report) = covariance_run(s, config, reference_dt).map_err(core_err(s))?;
    let mut o = Outcome::new();
    let sm = &report.summary;
    o.metrics.min_fidelity = Some(sm.min_fidelity);
    o.metrics.max_phase_distance = Some(sm.max_phase_distance);
    o.metrics.max_energy_transform_residual = Some(sm.max_energy_transform_residual);
    o.metrics.max_norm_drift = Some(sm.max_norm_drift);
    o.check_max("1 - min fidelity", 1.0 - sm.min_fidelity, tol.fidelity_loss);
    o.check_max(
        "max energy-transform residual",
        sm.max_energy_transform_residual,
        tol.energy_transform,
    );
    o.flags = report.flags.clone();
    o.add_covariance("covariance", &report, format);
    o.artifacts
        .push(("record_tau.csv".into(), report::record_csv(&record)));
    Ok(o)
}

fn classical_pair(s: &Scenario, tol: f64) -> relabel_core::Result<(Trajectory, Trajectory, f64)> {
    let Setup::Classical { x0, p0, .. } = s.setup else {
        unreachable!("validated: classical kind has a classical setup")
    };
    let tt = integrate_t(&s.potential, &s.constants, x0, p0, s.t_span, tol)?;
    let tr = integrate_tau(&s.potential, &s.constants, &s.map, x0, p0, s.tau_span, tol)?;
    let err = trajectory_equivalence(&tt, &tr, &s.map)?;
    Ok((tt, tr, err))
}

fn add_trajectories(o: &mut Outcome, tt: &Trajectory, tr: &Trajectory, format: OutputFormat) {
    for (stem, traj) in [("trajectory_t", tt), ("trajectory_tau", tr)] {
        if format.csv() {
            o.artifacts
                .push((format!("{stem}.csv"), report::trajectory_csv(traj)));
        }
        if format.json() {
            #[derive(Serialize)]
            struct Doc<'a> {
                clock_kind: relabel_core::ClockKind,
                samples: &'a [relabel_core::ClassicalState],
            }
            let doc = Doc {
                clock_kind: traj.clock_kind(),
                samples: traj.samples(),
            };
            o.artifacts.push((format!("{stem}.json"), to_json(&doc)));
        }
    }
}

fn execute_classical(s: &Scenario, tol: &Tolerances, format: OutputFormat) -> Result<Outcome> {
    let Setup::Classical { tol: itol, .. } = s.setup else {
        unreachable!("validated: classical kind has a classical setup")
    };
    let (tt, tr, err) = classical_pair(s, itol).map_err(core_err(s))?;
    let mut o = Outcome::new();
    o.metrics.max_trajectory_error = Some(err);
    o.check_max("max trajectory error", err, tol.trajectory_error);
    add_trajectories(&mut o, &tt, &tr, format);
    Ok(o)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct DtRow {
    dt: f64,
    min_fidelity: f64,
    max_phase_distance: f64,
    max_energy_transform_residual: f64,
    max_norm_drift: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct TolRow {
    tol: f64,
    steps_t: f64,
    steps_tau: f64,
    mean_step_tau: f64,
    max_error: f64,
}

fn execute_sweep(s: &Scenario, tol: &Tolerances, format: OutputFormat) -> Result<Outcome> {
    let mut o = Outcome::new();
    match s.sweep_or_default() {
        Sweep::Dt(dts) => {
            let (_, base, reference_dt) = quantum_parts(s);
            // one sampling interval for every cell, a whole number of the
            // coarsest steps, so all cells compare the same clock values
            let coarsest = dts.iter().cloned().fold(0.0, f64::max);
            let declared = base.dt() * base.record_every() as f64;
            let interval = coarsest * (declared / coarsest).round().max(1.0);
            let mut rows = Vec::with_capacity(dts.len());
            for &dt in &dts {
                let every = ((interval / dt).round() as usize).max(1);
                let cfg = PropagatorConfig::with_edge_guard(dt, every, base.edge_guard())
                    .map_err(core_err(s))?;
                let ref_dt = reference_dt.map(|r| r * dt / base.dt());
                let (_, report) = covariance_run(s, &cfg, ref_dt).map_err(core_err(s))?;
                for f in &report.flags {
                    o.flags.push(format!("dt = {dt:e}: {f}"));
                }
                let sm = report.summary;
                rows.push(DtRow {
                    dt,
                    min_fidelity: sm.min_fidelity,
                    max_phase_distance: sm.max_phase_distance,
                    max_energy_transform_residual: sm.max_energy_transform_residual,
                    max_norm_drift: sm.max_norm_drift,
                });
            }
            let steps: Vec<f64> = rows.iter().map(|r| r.dt).collect();
            let errs: Vec<f64> = rows.iter().map(|r| r.max_phase_distance).collect();
            let order = loglog_order(&steps, &errs).map_err(core_err(s))?;
            let energy: Vec<f64> = rows
                .iter()
                .map(|r| r.max_energy_transform_residual)
                .collect();
            o.metrics.energy_transform_order = loglog_order(&steps, &energy).ok();
            let finest = *rows
                .iter()
                .min_by(|a, b| a.dt.total_cmp(&b.dt))
                .expect("sweep has >= 2 cells");
            o.metrics.convergence_order = Some(order);
            o.metrics.min_fidelity = Some(finest.min_fidelity);
            o.metrics.max_phase_distance = Some(finest.max_phase_distance);
            o.metrics.max_energy_transform_residual = Some(finest.max_energy_transform_residual);
            o.check_band(
                "dt order of the phase-optimal distance",
                order,
                tol.order.unwrap_or(DEFAULT_DT_ORDER),
            );
            o.check_max(
                "1 - min fidelity at finest dt",
                1.0 - finest.min_fidelity,
                tol.fidelity_loss,
            );
            o.check_max(
                "energy-transform residual at finest dt",
                finest.max_energy_transform_residual,
                tol.energy_transform,
            );
            let table: Vec<[f64; 5]> = rows
                .iter()
                .map(|r| {
                    [
                        r.dt,
                        r.min_fidelity,
                        r.max_phase_distance,
                        r.max_energy_transform_residual,
                        r.max_norm_drift,
                    ]
                })
                .collect();
            push_table(
                &mut o,
                format,
                &[
                    "dt",
                    "min_fidelity",
                    "max_phase_distance",
                    "max_energy_transform_residual",
                    "max_norm_drift",
                ],
                &table,
                &rows,
            );
        }
        Sweep::Tol(tols) => {
            let mut rows = Vec::with_capacity(tols.len());
            for &t in &tols {
                let (tt, tr, err) = classical_pair(s, t).map_err(core_err(s))?;
                let steps_tau = (tr.samples().len() - 1) as f64;
                rows.push(TolRow {
                    tol: t,
                    steps_t: (tt.samples().len() - 1) as f64,
                    steps_tau,
                    mean_step_tau: (s.tau_span.1 - s.tau_span.0) / steps_tau,
                    max_error: err,
                });
            }
            let steps: Vec<f64> = rows.iter().map(|r| r.mean_step_tau).collect();
            let errs: Vec<f64> = rows.iter().map(|r| r.max_error).collect();
            let order = loglog_order(&steps, &errs).map_err(core_err(s))?;
            let finest = *rows
                .iter()
                .min_by(|a, b| a.tol.total_cmp(&b.tol))
                .expect("sweep has >= 2 cells");
            o.metrics.convergence_order = Some(order);
            o.metrics.max_trajectory_error = Some(finest.max_error);
            o.check_band(
                "mean-step order of the trajectory error",
                order,
                tol.order.unwrap_or(DEFAULT_TOL_ORDER),
            );
            o.check_max(
                "trajectory error at tightest tol",
                finest.max_error,
                tol.trajectory_error,
            );
            let table: Vec<[f64; 5]> = rows
                .iter()
                .map(|r| [r.tol, r.steps_t, r.steps_tau, r.mean_step_tau, r.max_error])
                .collect();
            push_table(
                &mut o,
                format,
                &["tol", "steps_t", "steps_tau", "mean_step_tau", "max_error"],
                &table,
                &rows,
            );
        }
    }
    Ok(o)
}

fn push_table<R: Serialize>(
    o: &mut Outcome,
    format: OutputFormat,
    columns: &[&str],
    table: &[[f64; 5]],
    rows: &[R],
) {
    if format.csv() {
        o.artifacts.push((
            "sweep.csv".into(),
            csv_table(columns, table.iter().map(|r| r.as_slice())),
        ));
    }
    if format.json() {
        #[derive(Serialize)]
        struct Doc<'a, R> {
            rows: &'a [R],
        }
        o.artifacts
            .push(("sweep.json".into(), to_json(&Doc { rows })));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(status: Status) -> RunSummary {
        RunSummary {
            name: "x".into(),
            kind: ScenarioKind::QuantumCovariance,
            status,
            metrics: Metrics::default(),
            profile: ToleranceProfile::Baseline,
            tolerances: Tolerances::default(),
            flags: Vec::new(),
            failures: Vec::new(),
            error: None,
            wall_time_s: 0.0,
        }
    }

    #[test]
    fn exit_code_contract() {
        use Status::*;
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(&[summary(Pass), summary(Pass)]), 0);
        assert_eq!(exit_code(&[summary(Pass), summary(Flagged)]), 3);
        assert_eq!(exit_code(&[summary(Flagged), summary(Fail)]), 1);
        assert_eq!(exit_code(&[summary(Fail), summary(Pass)]), 1);
    }

    #[test]
    fn strict_profile_tightens_only_declared_bounds() {
        let t = Tolerances {
            fidelity_loss: Some(1e-6),
            energy_transform: None,
            trajectory_error: Some(1e-5),
            order: Some([1.8, 2.2]),
        };
        let s = ToleranceProfile::Strict.apply(&t);
        assert_eq!(s.fidelity_loss, Some(STRICT_BOUND));
        assert_eq!(s.energy_transform, None);
        assert_eq!(s.trajectory_error, Some(STRICT_BOUND));
        assert_eq!(s.order, t.order);
        assert_eq!(ToleranceProfile::Baseline.apply(&t), t);
    }

    #[test]
    fn nan_metric_fails_the_bound() {
        let mut o = Outcome::new();
        o.check_max("m", f64::NAN, Some(1.0));
        o.check_band("order", f64::NAN, [1.8, 2.2]);
        assert_eq!(o.failures.len(), 2);
    }
}
