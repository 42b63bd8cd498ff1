use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solves `A x = rhs` in place for tridiagonal `A` with main diagonal `diag`
/// and both off-diagonals equal to `off` (Thomas algorithm, no pivoting).
///
/// `scratch` must have the same length as `diag`.
pub fn solve_symmetric_constant_off(
    diag: &[Complex64],
    off: Complex64,
    rhs: &mut [Complex64],
    scratch: &mut [Complex64],
) -> Result<()> {
    let n = diag.len();
    debug_assert!(rhs.len() == n && scratch.len() == n);
    if n == 0 {
        return Ok(());
    }
    let pivot_ok =
        |m: Complex64| m.norm() > f64::MIN_POSITIVE && m.re.is_finite() && m.im.is_finite();

    let mut m = diag[0];
    if !pivot_ok(m) {
        return Err(Error::Numerical(
            "zero pivot in tridiagonal solve at row 0".into(),
        ));
    }
    scratch[0] = off / m;
    rhs[0] /= m;
    for i in 1..n {
        m = diag[i] - off * scratch[i - 1];
        if !pivot_ok(m) {
            return Err(Error::Numerical(format!(
                "zero pivot in tridiagonal solve at row {i}"
            )));
        }
        scratch[i] = off / m;
        let prev = rhs[i - 1];
        rhs[i] = (rhs[i] - off * prev) / m;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= scratch[i] * next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_against_dense_multiply() {
        let n = 17;
        let diag: Vec<_> = (0..n)
            .map(|i| c(1.0 + 0.1 * i as f64, 2.0 - 0.05 * i as f64))
            .collect();
        let off = c(0.3, -0.4);
        let x_true: Vec<_> = (0..n)
            .map(|i| c((i as f64).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let mut b: Vec<_> = (0..n)
            .map(|i| {
                let mut s = diag[i] * x_true[i];
                if i > 0 {
                    s += off * x_true[i - 1];
                }
                if i + 1 < n {
                    s += off * x_true[i + 1];
                }
                s
            })
            .collect();
        let mut scratch = vec![c(0.0, 0.0); n];
        solve_symmetric_constant_off(&diag, off, &mut b, &mut scratch).unwrap();
        for (x, t) in b.iter().zip(&x_true) {
            assert!((x - t).norm() < 1e-13);
        }
    }

    #[test]
    fn singular_system_is_numerical_error() {
        let diag = vec![c(0.0, 0.0); 4];
        let mut rhs = vec![c(1.0, 0.0); 4];
        let mut scratch = vec![c(0.0, 0.0); 4];
        assert!(matches!(
            solve_symmetric_constant_off(&diag, c(1.0, 0.0), &mut rhs, &mut scratch),
            Err(Error::Numerical(_))
        ));
    }
}
