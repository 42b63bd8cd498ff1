//! Scenario files: TOML in, validated [`Scenario`] out.
//!
//! Every section rejects unknown keys, and `schema_version` is checked
//! before anything else so an old file fails with a version message rather
//! than a pile of unknown-field errors.

use std::path::Path;

use relabel_core::quantum::PropagatorConfig;
use relabel_core::{
    prepare_gaussian, PhysicalConstants, PotentialSpec, SpatialGrid, TimeMap, TimeMapFamily,
    Wavefunction,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: i64 = 1;

/// Relative slack when checking a declared t-interval against `T(tau)`.
const SPAN_MATCH_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    QuantumCovariance,
    ClassicalEquivalence,
    ConvergenceSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[allow(dead_code)]
    schema_version: i64,
    name: String,
    kind: ScenarioKind,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    constants: Option<RawConstants>,
    #[serde(default)]
    grid: Option<RawGrid>,
    potential: toml::Table,
    timemap: toml::Table,
    initial_state: RawInitial,
    spans: RawSpans,
    numerics: RawNumerics,
    #[serde(default)]
    sweep: Option<RawSweep>,
    tolerances: Tolerances,
    #[serde(default)]
    outputs: Option<RawOutputs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    hbar: f64,
    mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawInitial {
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default)]
        momentum: f64,
    },
    Point {
        x0: f64,
        p0: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpans {
    tau: [f64; 2],
    #[serde(default)]
    t: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    dt: Option<f64>,
    record_every: Option<usize>,
    edge_guard: Option<f64>,
    reference_dt: Option<f64>,
    tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    dt: Option<Vec<f64>>,
    tol: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    subdir: Option<String>,
    format: Option<OutputFormat>,
}

/// Declared pass thresholds. Which ones are required depends on the kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on `1 - min fidelity`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity_loss: Option<f64>,
    /// Bound on `max |<H~> - T' <H>|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_transform: Option<f64>,
    /// Bound on the classical trajectory mismatch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_error: Option<f64>,
    /// Accepted band for an estimated convergence order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<[f64; 2]>,
}

/// How the state is set up and stepped.
#[derive(Debug, Clone)]
pub enum Setup {
    Quantum {
        grid: SpatialGrid,
        initial: Wavefunction,
        config: PropagatorConfig,
        reference_dt: Option<f64>,
    },
    Classical {
        x0: f64,
        p0: f64,
        tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Propagator steps, coarse to fine.
    Dt(Vec<f64>),
    /// Integrator tolerances, loose to tight.
    Tol(Vec<f64>),
}

pub const DEFAULT_DT_SWEEP: [f64; 4] = [4e-3, 2e-3, 1e-3, 5e-4];
pub const DEFAULT_TOL_SWEEP: [f64; 4] = [1e-9, 1e-10, 1e-11, 1e-12];

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub description: Option<String>,
    pub constants: PhysicalConstants,
    pub potential: PotentialSpec,
    pub map: TimeMap,
    pub tau_span: (f64, f64),
    /// `[T(tau0), T(tau1)]`.
    pub t_span: (f64, f64),
    pub setup: Setup,
    pub sweep: Option<Sweep>,
    pub tolerances: Tolerances,
    pub subdir: String,
    pub format: OutputFormat,
}

impl Scenario {
    /// The declared sweep, or the default one for this setup.
    pub fn sweep_or_default(&self) -> Sweep {
        self.sweep.clone().unwrap_or_else(|| match self.setup {
            Setup::Quantum { .. } => Sweep::Dt(DEFAULT_DT_SWEEP.to_vec()),
            Setup::Classical { .. } => Sweep::Tol(DEFAULT_TOL_SWEEP.to_vec()),
        })
    }
}

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario_str(&text, &path.display().to_string())
}

/// Parses scenario text; `origin` prefixes every error message.
pub fn parse_scenario_str(text: &str, origin: &str) -> Result<Scenario> {
    let parse_err = |e: toml::de::Error| CliError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    };
    let table: toml::Table = toml::from_str(text).map_err(parse_err)?;
    match table.get("schema_version") {
        None => {
            return Err(CliError::Parse {
                origin: origin.to_string(),
                message: "missing required key `schema_version`".into(),
            })
        }
        Some(toml::Value::Integer(v)) if *v == SCHEMA_VERSION => {}
        Some(toml::Value::Integer(v)) => {
            return Err(CliError::Schema {
                origin: origin.to_string(),
                found: *v,
                expected: SCHEMA_VERSION,
            })
        }
        Some(other) => {
            return Err(CliError::Parse {
                origin: origin.to_string(),
                message: format!("`schema_version` must be an integer, got {other}"),
            })
        }
    }
    let raw: RawScenario = toml::from_str(text).map_err(parse_err)?;
    validate(raw, origin)
}

fn validate(raw: RawScenario, origin: &str) -> Result<Scenario> {
    let wrap = |section: &'static str| {
        move |source: relabel_core::Error| CliError::Invalid {
            origin: origin.to_string(),
            section,
            source,
        }
    };
    let invalid =
        |section, field: &str, msg: String| CliError::invalid(origin, section, field, msg);

    if raw.name.is_empty()
        || !raw
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
    {
        return Err(invalid(
            "scenario",
            "name",
            format!("must be non-empty [A-Za-z0-9_-], got {:?}", raw.name),
        ));
    }

    let constants = match raw.constants {
        Some(c) => PhysicalConstants::new(c.hbar, c.mass).map_err(wrap("constants"))?,
        None => PhysicalConstants::default(),
    };
    let potential: PotentialSpec = tagged_section(raw.potential, "potential", origin)?;
    potential.validate().map_err(wrap("potential"))?;
    let timemap: TimeMapFamily = tagged_section(raw.timemap, "timemap", origin)?;

    let tau_span = (raw.spans.tau[0], raw.spans.tau[1]);
    let map = TimeMap::new(timemap, tau_span.0, tau_span.1).map_err(wrap("timemap"))?;
    let t_span = map.t_interval();
    if let Some([a, b]) = raw.spans.t {
        let scale = t_span.0.abs().max(t_span.1.abs()).max(1.0);
        if (a - t_span.0).abs() > SPAN_MATCH_RTOL * scale
            || (b - t_span.1).abs() > SPAN_MATCH_RTOL * scale
        {
            return Err(invalid(
                "spans",
                "t",
                format!(
                    "declared [{a}, {b}] differs from [T(tau0), T(tau1)] = [{}, {}]",
                    t_span.0, t_span.1
                ),
            ));
        }
    }

    let n = &raw.numerics;
    let setup = match raw.initial_state {
        RawInitial::Gaussian {
            center,
            width,
            momentum,
        } => {
            let g = raw.grid.ok_or_else(|| {
                invalid(
                    "grid",
                    "grid",
                    "required for a Gaussian initial state".into(),
                )
            })?;
            let grid = SpatialGrid::new(g.x_min, g.x_max, g.n_points).map_err(wrap("grid"))?;
            let initial = prepare_gaussian(grid, center, width, momentum, &constants)
                .map_err(wrap("initial_state"))?;
            if n.tol.is_some() {
                return Err(invalid(
                    "numerics",
                    "tol",
                    "only used with a point initial state".into(),
                ));
            }
            let dt = n.dt.ok_or_else(|| {
                invalid("numerics", "dt", "required for quantum propagation".into())
            })?;
            let config = PropagatorConfig::with_edge_guard(
                dt,
                n.record_every.unwrap_or(1),
                n.edge_guard
                    .unwrap_or(relabel_core::quantum::DEFAULT_EDGE_GUARD),
            )
            .map_err(wrap("numerics"))?;
            if let Some(r) = n.reference_dt {
                if !(r.is_finite() && r > 0.0) {
                    return Err(invalid(
                        "numerics",
                        "reference_dt",
                        format!("must be > 0, got {r}"),
                    ));
                }
            }
            Setup::Quantum {
                grid,
                initial,
                config,
                reference_dt: n.reference_dt,
            }
        }
        RawInitial::Point { x0, p0 } => {
            if raw.grid.is_some() {
                return Err(invalid(
                    "grid",
                    "grid",
                    "only used with a Gaussian initial state".into(),
                ));
            }
            if !(x0.is_finite() && p0.is_finite()) {
                return Err(invalid(
                    "initial_state",
                    "x0",
                    "x0 and p0 must be finite".into(),
                ));
            }
            for (key, present) in [
                ("dt", n.dt.is_some()),
                ("record_every", n.record_every.is_some()),
                ("edge_guard", n.edge_guard.is_some()),
                ("reference_dt", n.reference_dt.is_some()),
            ] {
                if present {
                    return Err(invalid(
                        "numerics",
                        key,
                        "only used with a Gaussian initial state".into(),
                    ));
                }
            }
            let tol = n.tol.ok_or_else(|| {
                invalid(
                    "numerics",
                    "tol",
                    "required for classical integration".into(),
                )
            })?;
            check_positive(origin, "numerics", "tol", tol)?;
            Setup::Classical { x0, p0, tol }
        }
    };

    let quantum = matches!(setup, Setup::Quantum { .. });
    match (raw.kind, quantum) {
        (ScenarioKind::QuantumCovariance, false) => {
            return Err(invalid(
                "initial_state",
                "kind",
                "quantum_covariance needs a Gaussian initial state".into(),
            ))
        }
        (ScenarioKind::ClassicalEquivalence, true) => {
            return Err(invalid(
                "initial_state",
                "kind",
                "classical_equivalence needs a point initial state".into(),
            ))
        }
        _ => {}
    }

    let sweep = match raw.sweep {
        None => None,
        Some(s) => Some(match (s.dt, s.tol) {
            (Some(dt), None) if quantum => Sweep::Dt(dt),
            (None, Some(tol)) if !quantum => Sweep::Tol(tol),
            _ => {
                return Err(invalid(
                    "sweep",
                    if quantum { "dt" } else { "tol" },
                    format!(
                        "declare exactly `{}` for this initial state",
                        if quantum { "dt" } else { "tol" }
                    ),
                ))
            }
        }),
    };
    if let Some(Sweep::Dt(v) | Sweep::Tol(v)) = &sweep {
        if v.len() < 2 {
            return Err(invalid(
                "sweep",
                "values",
                "need at least two entries".into(),
            ));
        }
        for x in v {
            check_positive(origin, "sweep", "values", *x)?;
        }
    }
    if raw.kind == ScenarioKind::ConvergenceSweep && sweep.is_none() {
        return Err(invalid(
            "sweep",
            "sweep",
            "required for convergence_sweep".into(),
        ));
    }

    let t = raw.tolerances;
    let need = |present: bool, field: &str| {
        if present {
            Ok(())
        } else {
            Err(invalid(
                "tolerances",
                field,
                format!("required for {:?}", raw.kind),
            ))
        }
    };
    match raw.kind {
        ScenarioKind::QuantumCovariance => {
            need(t.fidelity_loss.is_some(), "fidelity_loss")?;
            need(t.energy_transform.is_some(), "energy_transform")?;
        }
        ScenarioKind::ClassicalEquivalence => {
            need(t.trajectory_error.is_some(), "trajectory_error")?
        }
        ScenarioKind::ConvergenceSweep => {
            need(t.order.is_some(), "order")?;
            if quantum {
                need(t.fidelity_loss.is_some(), "fidelity_loss")?;
            } else {
                need(t.trajectory_error.is_some(), "trajectory_error")?;
            }
        }
    }
    for (field, v) in [
        ("fidelity_loss", t.fidelity_loss),
        ("energy_transform", t.energy_transform),
        ("trajectory_error", t.trajectory_error),
    ] {
        if let Some(v) = v {
            check_positive(origin, "tolerances", field, v)?;
        }
    }
    if let Some([lo, hi]) = t.order {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(invalid(
                "tolerances",
                "order",
                format!("need lo <= hi, got [{lo}, {hi}]"),
            ));
        }
    }

    let (subdir, format) = match raw.outputs {
        Some(o) => (o.subdir, o.format),
        None => (None, None),
    };
    let subdir = subdir.unwrap_or_else(|| raw.name.clone());
    if subdir.is_empty() || subdir.contains(['/', '\\']) || subdir == "." || subdir == ".." {
        return Err(invalid(
            "outputs",
            "subdir",
            format!("must be a plain directory name, got {subdir:?}"),
        ));
    }

    Ok(Scenario {
        name: raw.name,
        kind: raw.kind,
        description: raw.description,
        constants,
        potential,
        map,
        tau_span,
        t_span,
        setup,
        sweep,
        tolerances: t,
        subdir,
        format: format.unwrap_or(OutputFormat::Both),
    })
}

/// Deserializes a `family`-tagged section. Serde lets unit variants
/// (`identity`, `free`) swallow extra keys, so any key that does not survive
/// a serialize round trip is reported as unknown.
fn tagged_section<T>(table: toml::Table, section: &str, origin: &str) -> Result<T>
where
    T: Serialize + serde::de::DeserializeOwned,
{
    let parse_err = |message: String| CliError::Parse {
        origin: origin.to_string(),
        message: format!("[{section}] {message}"),
    };
    let value: T = toml::Value::Table(table.clone())
        .try_into()
        .map_err(|e: toml::de::Error| parse_err(e.to_string()))?;
    let echoed = toml::Table::try_from(&value).map_err(|e| parse_err(e.to_string()))?;
    if let Some(key) = table.keys().find(|k| !echoed.contains_key(*k)) {
        return Err(parse_err(format!("unknown field `{key}`")));
    }
    Ok(value)
}

fn check_positive(origin: &str, section: &'static str, field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::invalid(
            origin,
            section,
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: &str = r#"
schema_version = 1
name = "identity"
kind = "quantum_covariance"

[grid]
x_min = -12.0
x_max = 12.0
n_points = 512

[potential]
family = "harmonic"
omega = 1.0

[timemap]
family = "identity"

[initial_state]
kind = "gaussian"
center = 1.0
width = 1.0

[spans]
tau = [0.0, 2.0]

[numerics]
dt = 1e-3
record_every = 100

[tolerances]
fidelity_loss = 1e-12
energy_transform = 1e-12
"#;

    fn with(replace: &str, by: &str) -> String {
        assert!(IDENTITY.contains(replace), "{replace}");
        IDENTITY.replacen(replace, by, 1)
    }

    #[test]
    fn identity_scenario_derives_equal_intervals() {
        let s = parse_scenario_str(IDENTITY, "test").unwrap();
        assert_eq!(s.t_span, s.tau_span);
        assert_eq!(s.kind, ScenarioKind::QuantumCovariance);
        assert_eq!(s.subdir, "identity");
        assert_eq!(s.format, OutputFormat::Both);
    }

    #[test]
    fn zero_alpha_names_monotonicity() {
        let text = with("family = \"identity\"", "family = \"linear\"\nalpha = 0.0");
        let err = parse_scenario_str(&text, "test").unwrap_err().to_string();
        assert!(err.contains("monotonicity"), "{err}");
        assert!(err.contains("[timemap]"), "{err}");
    }

    #[test]
    fn gaussian_near_wall_is_rejected() {
        let text = with("center = 1.0", "center = 11.5");
        let err = parse_scenario_str(&text, "test").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Invalid {
                    section: "initial_state",
                    ..
                }
            ),
            "{err}"
        );
        assert!(err.to_string().contains("leaves the box"));
    }

    #[test]
    fn unknown_keys_are_errors() {
        for (a, b) in [
            ("omega = 1.0", "omega = 1.0\nomgea = 2.0"),
            ("record_every = 100", "record_every = 100\nrecrod = 1"),
            (
                "name = \"identity\"",
                "name = \"identity\"\ncolour = \"red\"",
            ),
            (
                "family = \"identity\"",
                "family = \"identity\"\nalpha = 2.0",
            ),
        ] {
            match parse_scenario_str(&with(a, b), "test") {
                Err(CliError::Parse { .. }) => {}
                Err(e) => panic!("{b:?}: wrong error {e}"),
                Ok(_) => panic!("{b:?}: accepted"),
            }
        }
    }

    #[test]
    fn schema_version_is_required_and_checked() {
        let missing = IDENTITY.replacen("schema_version = 1", "", 1);
        assert!(matches!(
            parse_scenario_str(&missing, "test"),
            Err(CliError::Parse { .. })
        ));
        let wrong = with("schema_version = 1", "schema_version = 2");
        assert!(matches!(
            parse_scenario_str(&wrong, "test"),
            Err(CliError::Schema { found: 2, .. })
        ));
    }

    #[test]
    fn declared_t_span_must_match_map() {
        let lin = with("family = \"identity\"", "family = \"linear\"\nalpha = 2.0");
        let ok = lin.replacen("tau = [0.0, 2.0]", "tau = [0.0, 2.0]\nt = [0.0, 1.0]", 1);
        assert_eq!(parse_scenario_str(&ok, "test").unwrap().t_span, (0.0, 1.0));
        let bad = lin.replacen("tau = [0.0, 2.0]", "tau = [0.0, 2.0]\nt = [0.0, 2.0]", 1);
        let err = parse_scenario_str(&bad, "test").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Invalid {
                    section: "spans",
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn kind_and_state_must_agree() {
        let text = with(
            "kind = \"gaussian\"\ncenter = 1.0\nwidth = 1.0",
            "kind = \"point\"\nx0 = 1.0\np0 = 0.0",
        );
        assert!(parse_scenario_str(&text, "test").is_err());
    }

    #[test]
    fn required_tolerances_per_kind() {
        let text = with("energy_transform = 1e-12\n", "");
        let err = parse_scenario_str(&text, "test").unwrap_err();
        assert!(err.to_string().contains("energy_transform"), "{err}");
    }

    #[test]
    fn nonpositive_step_rejected() {
        let err = parse_scenario_str(&with("dt = 1e-3", "dt = 0.0"), "test").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Invalid {
                    section: "numerics",
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn moving_well_with_nested_center() {
        let text = with(
            "family = \"harmonic\"\nomega = 1.0",
            "family = \"moving_well\"\nstiffness = 1.5\ncenter = { offset = 0.5, velocity = 0.1 }",
        );
        let s = parse_scenario_str(&text, "test").unwrap();
        assert!(matches!(s.potential, PotentialSpec::MovingWell { .. }));
    }
}
