use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Action scale and particle mass. Natural units (`hbar = mass = 1`) by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    hbar: f64,
    mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::validation(
                "hbar",
                format!("must be finite and > 0, got {hbar}"),
            ));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::validation(
                "mass",
                format!("must be finite and > 0, got {mass}"),
            ));
        }
        Ok(Self { hbar, mass })
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive() {
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -2.0).is_err());
        assert!(PhysicalConstants::new(f64::NAN, 1.0).is_err());
        let c = PhysicalConstants::default();
        assert_eq!((c.hbar(), c.mass()), (1.0, 1.0));
    }
}
