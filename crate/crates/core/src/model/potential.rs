use serde::{Deserialize, Serialize};

use super::PhysicalConstants;
use crate::error::{Error, Result};

/// Trajectory of a moving well's minimum:
/// `c(t) = offset + velocity t + amplitude sin(frequency t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterPath {
    pub offset: f64,
    #[serde(default)]
    pub velocity: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub frequency: f64,
}

impl CenterPath {
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        self.offset + self.velocity * t + self.amplitude * (self.frequency * t).sin()
    }
}

/// A time-dependent potential `V(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Free,
    /// `m omega^2 x^2 / 2`.
    Harmonic {
        omega: f64,
    },
    /// `m omega(t)^2 x^2 / 2` with `omega(t) = omega0 + rate t`.
    DrivenHarmonic {
        omega0: f64,
        rate: f64,
    },
    /// `k (x - c(t))^2 / 2`.
    MovingWell {
        stiffness: f64,
        center: CenterPath,
    },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(field, format!("must be finite, got {v}")))
            }
        };
        match *self {
            PotentialSpec::Free => Ok(()),
            PotentialSpec::Harmonic { omega } => finite("omega", omega),
            PotentialSpec::DrivenHarmonic { omega0, rate } => {
                finite("omega0", omega0)?;
                finite("rate", rate)
            }
            PotentialSpec::MovingWell { stiffness, center } => {
                if !(stiffness.is_finite() && stiffness > 0.0) {
                    return Err(Error::validation(
                        "stiffness",
                        format!("must be finite and > 0, got {stiffness}"),
                    ));
                }
                finite("center.offset", center.offset)?;
                finite("center.velocity", center.velocity)?;
                finite("center.amplitude", center.amplitude)?;
                finite("center.frequency", center.frequency)
            }
        }
    }

    /// True when `V` does not depend on `t`.
    pub fn is_static(&self) -> bool {
        match *self {
            PotentialSpec::Free | PotentialSpec::Harmonic { .. } => true,
            PotentialSpec::DrivenHarmonic { rate, .. } => rate == 0.0,
            PotentialSpec::MovingWell { center, .. } => {
                center.velocity == 0.0 && (center.amplitude == 0.0 || center.frequency == 0.0)
            }
        }
    }

    #[inline]
    pub fn value(&self, mass: f64, t: f64, x: f64) -> f64 {
        match *self {
            PotentialSpec::Free => 0.0,
            PotentialSpec::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
            PotentialSpec::DrivenHarmonic { omega0, rate } => {
                let w = omega0 + rate * t;
                0.5 * mass * w * w * x * x
            }
            PotentialSpec::MovingWell { stiffness, center } => {
                let d = x - center.at(t);
                0.5 * stiffness * d * d
            }
        }
    }

    /// `dV/dx (t, x)`.
    #[inline]
    pub fn gradient(&self, mass: f64, t: f64, x: f64) -> f64 {
        match *self {
            PotentialSpec::Free => 0.0,
            PotentialSpec::Harmonic { omega } => mass * omega * omega * x,
            PotentialSpec::DrivenHarmonic { omega0, rate } => {
                let w = omega0 + rate * t;
                mass * w * w * x
            }
            PotentialSpec::MovingWell { stiffness, center } => stiffness * (x - center.at(t)),
        }
    }
}

/// `V(t, x)`, rejecting non-finite arguments.
pub fn eval_potential(
    spec: &PotentialSpec,
    constants: &PhysicalConstants,
    t: f64,
    x: f64,
) -> Result<f64> {
    if !(t.is_finite() && x.is_finite()) {
        return Err(Error::domain(format!(
            "non-finite potential argument (t={t}, x={x})"
        )));
    }
    Ok(spec.value(constants.mass(), t, x))
}
