//! Scenario ingestion, experiment orchestration and report emission for
//! clock-relabeling experiments.

// `!(x > 0.0)` is how NaN gets rejected alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalogue;
pub mod error;
pub mod report;
pub mod runner;
pub mod scenario;

pub use error::{CliError, Result};
pub use report::emit_report;
pub use runner::{exit_code, run_scenario, RunSummary, Status, ToleranceProfile};
pub use scenario::{parse_scenario, parse_scenario_str, OutputFormat, Scenario, ScenarioKind};
