//! Batch scenario runner: JSON configuration in, JSON report (and optional CSV spectra) out.

pub mod config;
pub mod corpus;
pub mod report;
pub mod runner;

use std::path::Path;

pub use config::{Config, Scenario, ScenarioKind};
pub use corpus::corpus;
pub use report::{FailureClass, LedgerEntry, ReportFile, RunReport};
pub use runner::{run_scenarios, RunOptions};

use crate::error::{Error, Result};

/// Reads a config, runs it and writes the report. Returns the process exit code.
pub fn run(config: &Path, out: &Path, opts: &RunOptions) -> Result<i32> {
    let text = std::fs::read_to_string(config)?;
    let cfg = Config::parse(&text)?;
    write_report(&cfg.scenarios, out, opts)
}

/// Runs a freshly generated corpus of `count` scenarios.
pub fn run_corpus(seed: u64, count: usize, out: &Path, opts: &RunOptions) -> Result<i32> {
    let mut s = Scenario::new(ScenarioKind::Corpus);
    s.id = Some("corpus".into());
    s.corpus = Some(config::CorpusSpec { seed, count });
    write_report(&[s], out, opts)
}

fn write_report(scenarios: &[Scenario], out: &Path, opts: &RunOptions) -> Result<i32> {
    if let Some(dir) = &opts.csv_dir {
        std::fs::create_dir_all(dir)?;
    }
    let report = run_scenarios(scenarios, opts)?;
    std::fs::write(out, report.to_json())?;
    Ok(report.summary.exit_code)
}

/// Exit code for an error raised before any scenario ran.
pub fn exit_code_for(e: &Error) -> i32 {
    FailureClass::of(e).exit_code()
}
