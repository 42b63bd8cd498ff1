//! Scenarios shipped with the binary; they double as the acceptance baseline.

use crate::error::Result;
use crate::scenario::{parse_scenario_str, Scenario};

pub struct Entry {
    pub file: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: &[Entry] = &[
    Entry {
        file: "identity_gauge.toml",
        text: include_str!("../scenarios/identity_gauge.toml"),
    },
    Entry {
        file: "linear_alpha_2.toml",
        text: include_str!("../scenarios/linear_alpha_2.toml"),
    },
    Entry {
        file: "linear_alpha_half.toml",
        text: include_str!("../scenarios/linear_alpha_half.toml"),
    },
    Entry {
        file: "sine_driven.toml",
        text: include_str!("../scenarios/sine_driven.toml"),
    },
    Entry {
        file: "classical_linear.toml",
        text: include_str!("../scenarios/classical_linear.toml"),
    },
    Entry {
        file: "classical_sine_driven.toml",
        text: include_str!("../scenarios/classical_sine_driven.toml"),
    },
    Entry {
        file: "sweep_linear_dt.toml",
        text: include_str!("../scenarios/sweep_linear_dt.toml"),
    },
    Entry {
        file: "sweep_sine_driven_dt.toml",
        text: include_str!("../scenarios/sweep_sine_driven_dt.toml"),
    },
    Entry {
        file: "sweep_classical_tol.toml",
        text: include_str!("../scenarios/sweep_classical_tol.toml"),
    },
];

impl Entry {
    pub fn parse(&self) -> Result<Scenario> {
        parse_scenario_str(self.text, &format!("bundled:{}", self.file))
    }
}

/// All bundled scenarios, parsed, in catalogue order.
pub fn bundled() -> Result<Vec<Scenario>> {
    BUNDLED.iter().map(Entry::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_scenario_validates_with_unique_dirs() {
        let all = bundled().unwrap();
        let mut dirs: Vec<_> = all.iter().map(|s| s.subdir.clone()).collect();
        dirs.sort();
        dirs.dedup();
        assert_eq!(dirs.len(), all.len());
    }
}
