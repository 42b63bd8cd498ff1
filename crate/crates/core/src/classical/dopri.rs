//! Dormand-Prince 5(4) with Hairer's continuous extension.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Options {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 2_000_000,
        }
    }
}

/// Quartic interpolant over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| {
            r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])))
        })
    }

    #[inline]
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }
}

#[derive(Debug, Clone, Default)]
pub struct Solution<const N: usize> {
    /// Accepted step endpoints, including the initial point.
    pub nodes: Vec<(f64, [f64; N])>,
    /// `segments[i]` spans `nodes[i]..nodes[i + 1]`.
    pub segments: Vec<DenseSegment<N>>,
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], o: &Options) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = o.atol + o.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: &[f64; N],
    k1: &[f64; N],
    span: f64,
    o: &Options,
) -> Result<f64>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let sc: [f64; N] = std::array::from_fn(|i| o.atol + o.rtol * y0[i].abs());
    let rms =
        |v: &[f64; N]| ((0..N).map(|i| (v[i] / sc[i]).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d0 = rms(y0);
    let d1 = rms(k1);
    let mut h0 = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(span);
    let y1 = axpy(y0, h0, &[(1.0, k1)]);
    let k2 = f(t0 + h0, &y1)?;
    let diff: [f64; N] = std::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 > t0`.
///
/// Stage abscissae never exceed `t1`, and the last node lands on `t1` exactly.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    o: &Options,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::validation(
            "span",
            format!("need t0 < t1, got [{t0}, {t1}]"),
        ));
    }
    if !(o.rtol > 0.0 && o.atol > 0.0) {
        return Err(Error::validation("tol", "tolerances must be > 0"));
    }
    let span = t1 - t0;
    let mut sol = Solution {
        nodes: vec![(t0, y0)],
        segments: Vec::new(),
    };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    let mut h = initial_step(&mut f, t, &y, &k1, span, o)?;
    let mut rejected_last = false;

    for _ in 0..o.max_steps {
        let remaining = t1 - t;
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(span);
        if h < h_min {
            return Err(Error::IntegrationFailure {
                clock: t,
                reason: format!("step size {h:e} underflowed below {h_min:e}"),
            });
        }
        let clamp = |s: f64| s.min(t1);
        let k2 = f(clamp(t + C2 * h), &axpy(&y, h, &[(A21, &k1)]))?;
        let k3 = f(clamp(t + C3 * h), &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(
            clamp(t + C4 * h),
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = f(
            clamp(t + C5 * h),
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let t_next = if last { t1 } else { clamp(t + h) };
        let k6 = f(
            t_next,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )?;
        let y_next = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(t_next, &y_next)?;
        let err: [f64; N] = std::array::from_fn(|i| {
            h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        let en = error_norm(&err, &y, &y_next, o);
        if !en.is_finite() {
            return Err(Error::IntegrationFailure {
                clock: t,
                reason: "non-finite error estimate".into(),
            });
        }

        if en <= 1.0 {
            let ydiff: [f64; N] = std::array::from_fn(|i| y_next[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let r4: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]);
            let r5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            sol.segments.push(DenseSegment {
                t0: t,
                h: t_next - t,
                coeffs: [y, ydiff, bspl, r4, r5],
            });
            sol.nodes.push((t_next, y_next));
            if last {
                return Ok(sol);
            }
            t = t_next;
            y = y_next;
            k1 = k7;
            let mut fac = SAFETY * en.max(1e-10).powf(-0.2);
            if rejected_last {
                fac = fac.min(1.0);
            }
            h *= fac.clamp(FAC_MIN, FAC_MAX);
            rejected_last = false;
        } else {
            h *= (SAFETY * en.powf(-0.2)).clamp(FAC_MIN, 1.0);
            rejected_last = true;
        }
    }
    Err(Error::IntegrationFailure {
        clock: t,
        reason: format!("exceeded {} steps", o.max_steps),
    })
}
