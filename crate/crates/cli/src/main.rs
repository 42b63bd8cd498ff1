use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use relabel_cli::catalogue::{self, BUNDLED};
use relabel_cli::runner::{run_sweep, RunOptions};
use relabel_cli::{
    exit_code, parse_scenario, run_scenario, CliError, OutputFormat, Scenario, ToleranceProfile,
};

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "relabel",
    version,
    about = "Clock-reparametrization covariance experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunFlags {
    /// Root directory for per-scenario artifact folders.
    #[arg(long, default_value = "relabel-out")]
    out: PathBuf,
    /// Artifact format; defaults to each scenario's `[outputs] format`.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for independent scenarios (0 = one per core).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "baseline")]
    tolerance_profile: ToleranceProfile,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files.
    Run {
        files: Vec<PathBuf>,
        /// Also run every bundled scenario.
        #[arg(long)]
        bundled: bool,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Convergence sweep (dt for quantum, tol for classical) on one scenario.
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Parse and validate a scenario without running it.
    Validate { file: PathBuf },
    /// List the bundled scenarios.
    Catalogue,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Run {
            files,
            bundled,
            flags,
        } => {
            let mut scenarios = files
                .iter()
                .map(|f| parse_scenario(f))
                .collect::<Result<Vec<_>, _>>()?;
            if bundled {
                scenarios.extend(catalogue::bundled()?);
            }
            if scenarios.is_empty() {
                return Err(CliError::Usage(
                    "nothing to run: pass scenario files or --bundled".into(),
                ));
            }
            let mut dirs: Vec<&str> = scenarios.iter().map(|s| s.subdir.as_str()).collect();
            dirs.sort_unstable();
            if let Some(w) = dirs.windows(2).find(|w| w[0] == w[1]) {
                return Err(CliError::Usage(format!(
                    "two scenarios write to the same directory {:?}",
                    w[0]
                )));
            }
            execute(&scenarios, &flags, run_scenario)
        }
        Command::Sweep { file, flags } => {
            let s = parse_scenario(&file)?;
            execute(std::slice::from_ref(&s), &flags, run_sweep)
        }
        Command::Validate { file } => {
            let s = parse_scenario(&file)?;
            println!(
                "ok  {}  {:?}  tau [{}, {}] -> t [{}, {}]",
                s.name, s.kind, s.tau_span.0, s.tau_span.1, s.t_span.0, s.t_span.1
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalogue => {
            for entry in BUNDLED {
                let s = entry.parse()?;
                println!(
                    "{:<24}{:<24}{}",
                    s.name,
                    format!("{:?}", s.kind),
                    s.description.as_deref().unwrap_or("")
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn execute(
    scenarios: &[Scenario],
    flags: &RunFlags,
    run: fn(&Scenario, &RunOptions) -> relabel_cli::RunSummary,
) -> Result<ExitCode, CliError> {
    let opts = RunOptions {
        out_dir: flags.out.clone(),
        format: flags.format,
        profile: flags.tolerance_profile,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    let summaries: Vec<_> = pool.install(|| scenarios.par_iter().map(|s| run(s, &opts)).collect());
    for s in &summaries {
        println!("{}", s.line());
    }
    Ok(ExitCode::from(exit_code(&summaries) as u8))
}
