use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use opalg::cli::{exit_code_for, run, run_corpus, RunOptions};

/// Runs operator-algebra scenarios from a JSON config and writes a JSON report.
#[derive(Parser, Debug)]
#[command(name = "opalg", version)]
struct Args {
    /// Scenario configuration (JSON).
    #[arg(long, required_unless_present = "corpus")]
    config: Option<PathBuf>,
    /// Report destination.
    #[arg(long)]
    out: PathBuf,
    /// Override every scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiply every residual threshold.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Generate and run a corpus of N scenarios instead of reading a config.
    #[arg(long, value_name = "N", conflicts_with = "config")]
    corpus: Option<usize>,
    /// Maximum scenarios run concurrently.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write spectra as CSV files into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
    /// Record wall-clock time per scenario (reports stop being byte-identical).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        seed: args.seed,
        tolerance_scale: args.tolerance_scale,
        jobs: args.jobs,
        timings: args.timings,
        csv_dir: args.csv_dir,
    };
    let result = match (&args.config, args.corpus) {
        (_, Some(n)) => run_corpus(args.seed.unwrap_or(0), n, &args.out, &opts),
        (Some(cfg), None) => run(cfg, &args.out, &opts),
        (None, None) => unreachable!("clap requires one of --config/--corpus"),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("opalg: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
