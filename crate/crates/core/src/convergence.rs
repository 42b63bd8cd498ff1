//! Observed convergence order from step-refinement data.

use crate::error::{Error, Result};

/// Least-squares slope of `ln(error)` against `ln(step)`.
pub fn loglog_order(steps: &[f64], errors: &[f64]) -> Result<f64> {
    if steps.len() != errors.len() || steps.len() < 2 {
        return Err(Error::validation(
            "convergence",
            "need at least two (step, error) pairs of equal length",
        ));
    }
    if steps
        .iter()
        .chain(errors)
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(Error::validation(
            "convergence",
            "steps and errors must be finite and > 0",
        ));
    }
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::validation(
            "convergence",
            "steps must not all be equal",
        ));
    }
    Ok(sxy / sxx)
}

/// `log2(e_i / e_{i+1})` for successive halvings.
pub fn halving_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let h = [4e-3, 2e-3, 1e-3, 5e-4];
        let e: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        assert!((loglog_order(&h, &e).unwrap() - 2.0).abs() < 1e-12);
        for o in halving_orders(&e) {
            assert!((o - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(loglog_order(&[1.0], &[1.0]).is_err());
        assert!(loglog_order(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(loglog_order(&[1.0, 0.5], &[0.0, 2.0]).is_err());
    }
}
