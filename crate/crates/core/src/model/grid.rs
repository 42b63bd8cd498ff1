use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PhysicalConstants;
use crate::error::{Error, Result};

/// Uniform 1D grid including both Dirichlet boundary nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::validation(
                "grid",
                format!("need finite x_min < x_max, got [{x_min}, {x_max}]"),
            ));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::validation(
                "n_points",
                format!("need at least {} points, got {n_points}", Self::MIN_POINTS),
            ));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let dx = self.dx();
        (0..self.n_points).map(move |j| self.x_min + j as f64 * dx)
    }
}

/// Complex amplitudes on a [`SpatialGrid`] with zero boundary values.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    grid: SpatialGrid,
    amplitudes: Vec<Complex64>,
}

impl Wavefunction {
    pub fn new(grid: SpatialGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::validation(
                "amplitudes",
                format!(
                    "expected {} amplitudes, got {}",
                    grid.len(),
                    amplitudes.len()
                ),
            ));
        }
        if let Some(j) = amplitudes
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::validation(
                "amplitudes",
                format!("non-finite amplitude at j={j}"),
            ));
        }
        let last = amplitudes.len() - 1;
        if amplitudes[0] != Complex64::new(0.0, 0.0) || amplitudes[last] != Complex64::new(0.0, 0.0)
        {
            return Err(Error::validation(
                "amplitudes",
                "Dirichlet boundary requires zero amplitude at both edges",
            ));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Samples `f` at interior nodes; boundary nodes are set to zero.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let n = grid.len();
        let amps = grid
            .points()
            .enumerate()
            .map(|(j, x)| {
                if j == 0 || j == n - 1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(x)
                }
            })
            .collect();
        Self::new(grid, amps)
    }

    /// Internal constructor for propagators that keep the boundary pinned.
    pub(crate) fn from_parts_unchecked(grid: SpatialGrid, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), amplitudes.len());
        Self { grid, amplitudes }
    }

    #[inline]
    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// `sqrt(sum |psi_j|^2 dx)`.
    pub fn norm(&self) -> f64 {
        (self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::Numerical("cannot normalize a zero state".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `sum conj(self_j) other_j dx`.
    pub fn inner(&self, other: &Wavefunction) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let s: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.grid.dx())
    }

    pub(crate) fn check_same_grid(&self, other: &Wavefunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::validation(
                "grid",
                "wavefunctions live on different grids",
            ));
        }
        Ok(())
    }

    /// Probability-weighted mean position.
    pub fn mean_position(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (x, z) in self.grid.points().zip(&self.amplitudes) {
            let p = z.norm_sqr();
            num += x * p;
            den += p;
        }
        num / den
    }

    pub fn position_variance(&self) -> f64 {
        let mean = self.mean_position();
        let (mut num, mut den) = (0.0, 0.0);
        for (x, z) in self.grid.points().zip(&self.amplitudes) {
            let p = z.norm_sqr();
            num += (x - mean) * (x - mean) * p;
            den += p;
        }
        num / den
    }

    /// Probability mass within the outer `fraction` of the box, split evenly
    /// between the two edges.
    pub fn edge_mass(&self, fraction: f64) -> f64 {
        let strip = 0.5 * fraction * (self.grid.x_max - self.grid.x_min);
        let lo = self.grid.x_min + strip;
        let hi = self.grid.x_max - strip;
        let mass: f64 = self
            .grid
            .points()
            .zip(&self.amplitudes)
            .filter(|(x, _)| *x < lo || *x > hi)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        mass * self.grid.dx()
    }
}

/// Number of density standard deviations that must fit inside the box on
/// each side of the packet center.
pub const SUPPORT_SIGMAS: f64 = 8.0;

/// Normalized `exp(-(x - center)^2 / (2 width^2) + i momentum x / hbar)`.
///
/// The density `|psi|^2` has standard deviation `width / sqrt(2)`; the packet
/// must keep [`SUPPORT_SIGMAS`] of them clear of both walls.
pub fn prepare_gaussian(
    grid: SpatialGrid,
    center: f64,
    width: f64,
    momentum: f64,
    constants: &PhysicalConstants,
) -> Result<Wavefunction> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::validation(
            "width",
            format!("must be > 0, got {width}"),
        ));
    }
    if !(center.is_finite() && momentum.is_finite()) {
        return Err(Error::validation(
            "center",
            "center and momentum must be finite",
        ));
    }
    let sigma = width / std::f64::consts::SQRT_2;
    let reach = SUPPORT_SIGMAS * sigma;
    if center - reach <= grid.x_min() || center + reach >= grid.x_max() {
        return Err(Error::validation(
            "initial_state",
            format!(
                "Gaussian support [{}, {}] (center ± {SUPPORT_SIGMAS} sigma) leaves the box [{}, {}]",
                center - reach,
                center + reach,
                grid.x_min(),
                grid.x_max()
            ),
        ));
    }
    let hbar = constants.hbar();
    let raw = Wavefunction::from_fn(grid, |x| {
        let u = (x - center) / width;
        Complex64::from_polar((-0.5 * u * u).exp(), momentum * x / hbar)
    })?;
    raw.normalized()
}
