//! CSV and JSON emitters.
//!
//! Every float goes through `{:.16e}` (17 significant digits) in CSV, so a
//! rerun of the same build produces the same bytes. JSON uses the shortest
//! round-trip representation and parses back exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use relabel_core::classical::Trajectory;
use relabel_core::quantum::{CovarianceReport, EvolutionRecord};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::scenario::{OutputFormat, SCHEMA_VERSION};

pub const COVARIANCE_COLUMNS: [&str; 9] = [
    "tau",
    "t",
    "fidelity",
    "norm_psi",
    "norm_phi",
    "energy_t",
    "energy_tau",
    "Tprime",
    "energy_transform_residual",
];

pub const TRAJECTORY_COLUMNS: [&str; 4] = ["clock", "t_equivalent", "q", "pm"];

pub const RECORD_COLUMNS: [&str; 5] = ["clock", "t_equivalent", "norm", "energy", "edge_mass"];

/// Header line plus one `{:.16e}` row per entry.
pub fn csv_table<'a>(columns: &[&str], rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn covariance_csv(report: &CovarianceReport) -> String {
    let rows: Vec<[f64; 9]> = report
        .samples
        .iter()
        .map(|s| {
            [
                s.tau,
                s.t,
                s.fidelity,
                s.norm_psi,
                s.norm_phi,
                s.energy_t,
                s.energy_tau,
                s.t_rate,
                s.energy_transform_residual,
            ]
        })
        .collect();
    csv_table(&COVARIANCE_COLUMNS, rows.iter().map(|r| r.as_slice()))
}

#[derive(Serialize, Deserialize)]
struct Versioned<T> {
    schema_version: i64,
    #[serde(flatten)]
    body: T,
}

pub fn to_json<T: Serialize>(body: &T) -> String {
    let doc = Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report types serialize");
    s.push('\n');
    s
}

pub fn covariance_json(report: &CovarianceReport) -> String {
    to_json(report)
}

/// Inverse of [`covariance_json`]; rejects other schema versions.
pub fn parse_covariance_json(text: &str) -> Result<CovarianceReport> {
    let doc: Versioned<CovarianceReport> =
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            origin: "covariance json".into(),
            message: e.to_string(),
        })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(CliError::Schema {
            origin: "covariance json".into(),
            found: doc.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(doc.body)
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let rows: Vec<[f64; 4]> = traj
        .samples()
        .iter()
        .map(|s| [s.clock, traj.t_equivalent(s), s.q, s.pm])
        .collect();
    csv_table(&TRAJECTORY_COLUMNS, rows.iter().map(|r| r.as_slice()))
}

pub fn record_csv(record: &EvolutionRecord) -> String {
    let rows: Vec<[f64; 5]> = record
        .snapshots()
        .iter()
        .map(|s| [s.clock, s.t_equivalent, s.norm, s.energy, s.edge_mass])
        .collect();
    csv_table(&RECORD_COLUMNS, rows.iter().map(|r| r.as_slice()))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes `stem.csv` and/or `stem.json` and returns the paths written.
pub fn emit_report(
    report: &CovarianceReport,
    format: OutputFormat,
    stem: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if format.csv() {
        let p = stem.with_extension("csv");
        write_file(&p, &covariance_csv(report))?;
        written.push(p);
    }
    if format.json() {
        let p = stem.with_extension("json");
        write_file(&p, &covariance_json(report))?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use relabel_core::quantum::CovarianceSample;

    fn sample(tau: f64) -> CovarianceSample {
        CovarianceSample {
            tau,
            t: tau,
            fidelity: 1.0,
            norm_psi: 1.0,
            norm_phi: 1.0 - 1e-15,
            energy_t: 0.1 + 0.2,
            energy_tau: std::f64::consts::PI,
            t_rate: 1.0,
            energy_transform_residual: 3.0e-300,
            phase_distance: 0.0,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = CovarianceReport::from_samples(Vec::new(), Vec::new());
        assert_eq!(
            covariance_csv(&r),
            "tau,t,fidelity,norm_psi,norm_phi,energy_t,energy_tau,Tprime,energy_transform_residual\n"
        );
    }

    #[test]
    fn identity_row_has_tau_equal_t_and_unit_fidelity() {
        let r = CovarianceReport::from_samples(vec![sample(0.25)], Vec::new());
        let csv = covariance_csv(&r);
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), 9);
        assert_eq!(row[0], row[1]);
        assert_eq!(row[2], "1.0000000000000000e0");
        // 17 significant digits recover every value exactly
        let energy: f64 = row[5].parse().unwrap();
        assert_eq!(energy, 0.1 + 0.2);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let samples = (0..5).map(|k| sample(0.1 * k as f64 + 1e-17)).collect();
        let r = CovarianceReport::from_samples(samples, vec!["relabeled: x".into()]);
        let text = covariance_json(&r);
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"Tprime\""));
        let back = parse_covariance_json(&text).unwrap();
        assert_eq!(back, r);
        for (a, b) in back.samples.iter().zip(&r.samples) {
            assert_eq!(a.energy_t.to_bits(), b.energy_t.to_bits());
            assert_eq!(a.norm_phi.to_bits(), b.norm_phi.to_bits());
        }
    }

    #[test]
    fn json_with_other_version_is_rejected() {
        let r = CovarianceReport::from_samples(vec![sample(0.0)], Vec::new());
        let text = covariance_json(&r).replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(
            parse_covariance_json(&text),
            Err(CliError::Schema { found: 7, .. })
        ));
    }

    #[test]
    fn emit_writes_requested_formats() {
        let dir = tempfile::tempdir().unwrap();
        let r = CovarianceReport::from_samples(vec![sample(0.0)], Vec::new());
        let stem = dir.path().join("covariance");
        let paths = emit_report(&r, OutputFormat::Both, &stem).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.exists()));
        let missing = dir.path().join("no/such/dir/covariance");
        assert!(matches!(
            emit_report(&r, OutputFormat::Csv, &missing),
            Err(CliError::Io { .. })
        ));
    }
}
