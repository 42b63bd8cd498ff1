use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible clock rate `T'` anywhere on the domain.
pub const MIN_RATE: f64 = 1e-6;

/// Number of intervals used for the sampled monotonicity check.
pub const MONOTONE_SAMPLES: usize = 10_000;

/// Shape of a clock relabeling `t = T(tau)`.
///
/// Every family is anchored so that `T(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeMapFamily {
    /// `T(tau) = tau`.
    Identity,
    /// `T(tau) = tau / alpha`; the new clock runs faster when `alpha > 1`.
    Linear { alpha: f64 },
    /// `T(tau) = tau + a sin(w tau)`.
    SinePerturbed { amplitude: f64, frequency: f64 },
    /// Rate blends smoothly from 1 to `rate` around `center`:
    /// `T'(tau) = 1 + (rate - 1) (1 + tanh((tau - center) / width)) / 2`.
    SmoothRamp { rate: f64, center: f64, width: f64 },
}

/// A validated monotone clock map on a closed parameter interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeMap {
    family: TimeMapFamily,
    domain: (f64, f64),
}

impl TimeMap {
    /// Validates the family parameters and `T' > 0` on `[tau0, tau1]`.
    pub fn new(family: TimeMapFamily, tau0: f64, tau1: f64) -> Result<Self> {
        if !(tau0.is_finite() && tau1.is_finite() && tau0 < tau1) {
            return Err(Error::validation(
                "domain",
                format!("need finite tau0 < tau1, got [{tau0}, {tau1}]"),
            ));
        }
        match family {
            TimeMapFamily::Identity => {}
            TimeMapFamily::Linear { alpha } => {
                if !(alpha.is_finite() && alpha > 0.0) {
                    return Err(Error::validation(
                        "alpha",
                        format!("monotonicity dT/dtau > 0 requires alpha > 0, got {alpha}"),
                    ));
                }
            }
            TimeMapFamily::SinePerturbed {
                amplitude,
                frequency,
            } => {
                if !(amplitude.is_finite() && frequency.is_finite()) {
                    return Err(Error::validation("amplitude", "parameters must be finite"));
                }
                let margin = 1.0 - (amplitude * frequency).abs();
                if margin < MIN_RATE {
                    return Err(Error::validation(
                        "amplitude",
                        format!(
                            "monotonicity dT/dtau > 0 requires |a w| < 1, got |a w| = {}",
                            (amplitude * frequency).abs()
                        ),
                    ));
                }
            }
            TimeMapFamily::SmoothRamp {
                rate,
                center,
                width,
            } => {
                if !(rate.is_finite() && rate > 0.0) {
                    return Err(Error::validation(
                        "rate",
                        format!("monotonicity dT/dtau > 0 requires rate > 0, got {rate}"),
                    ));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::validation(
                        "width",
                        format!("must be > 0, got {width}"),
                    ));
                }
                if !center.is_finite() {
                    return Err(Error::validation("center", "must be finite"));
                }
            }
        }
        let map = Self {
            family,
            domain: (tau0, tau1),
        };
        if !matches!(
            family,
            TimeMapFamily::Identity | TimeMapFamily::Linear { .. }
        ) {
            let min = map.sampled_min_rate(MONOTONE_SAMPLES);
            if !(min >= MIN_RATE) {
                return Err(Error::validation(
                    "timemap",
                    format!("monotonicity dT/dtau > 0 violated: sampled min T' = {min:e}"),
                ));
            }
        }
        Ok(map)
    }

    pub fn identity(tau0: f64, tau1: f64) -> Result<Self> {
        Self::new(TimeMapFamily::Identity, tau0, tau1)
    }

    pub fn linear(alpha: f64, tau0: f64, tau1: f64) -> Result<Self> {
        Self::new(TimeMapFamily::Linear { alpha }, tau0, tau1)
    }

    pub fn sine_perturbed(amplitude: f64, frequency: f64, tau0: f64, tau1: f64) -> Result<Self> {
        Self::new(
            TimeMapFamily::SinePerturbed {
                amplitude,
                frequency,
            },
            tau0,
            tau1,
        )
    }

    pub fn smooth_ramp(rate: f64, center: f64, width: f64, tau0: f64, tau1: f64) -> Result<Self> {
        Self::new(
            TimeMapFamily::SmoothRamp {
                rate,
                center,
                width,
            },
            tau0,
            tau1,
        )
    }

    #[inline]
    pub fn family(&self) -> TimeMapFamily {
        self.family
    }

    #[inline]
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// `[T(tau0), T(tau1)]`.
    pub fn t_interval(&self) -> (f64, f64) {
        (
            self.value_unchecked(self.domain.0).0,
            self.value_unchecked(self.domain.1).0,
        )
    }

    pub fn contains(&self, tau: f64) -> bool {
        let (a, b) = self.domain;
        let slack = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        tau >= a - slack && tau <= b + slack
    }

    /// `(T(tau), T'(tau))`, rejecting `tau` outside the domain.
    pub fn eval(&self, tau: f64) -> Result<(f64, f64)> {
        if !self.contains(tau) {
            return Err(Error::domain(format!(
                "tau = {tau} outside time-map domain [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        Ok(self.value_unchecked(tau))
    }

    /// Analytic `(T, T')` without the domain check.
    pub(crate) fn value_unchecked(&self, tau: f64) -> (f64, f64) {
        match self.family {
            TimeMapFamily::Identity => (tau, 1.0),
            TimeMapFamily::Linear { alpha } => (tau / alpha, 1.0 / alpha),
            TimeMapFamily::SinePerturbed {
                amplitude,
                frequency,
            } => {
                let (s, c) = (frequency * tau).sin_cos();
                (tau + amplitude * s, 1.0 + amplitude * frequency * c)
            }
            TimeMapFamily::SmoothRamp {
                rate,
                center,
                width,
            } => {
                let u = (tau - center) / width;
                let k = 0.5 * (rate - 1.0);
                let t = tau + k * (tau + width * (ln_cosh(u) - ln_cosh(-center / width)));
                (t, 1.0 + k * (1.0 + u.tanh()))
            }
        }
    }

    /// Minimum of `T'` over `intervals + 1` equally spaced points of the domain.
    pub fn sampled_min_rate(&self, intervals: usize) -> f64 {
        let (a, b) = self.domain;
        let n = intervals.max(1);
        (0..=n)
            .map(|i| {
                let tau = a + (b - a) * (i as f64 / n as f64);
                self.value_unchecked(tau).1
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

pub fn eval_timemap(map: &TimeMap, tau: f64) -> Result<(f64, f64)> {
    map.eval(tau)
}
