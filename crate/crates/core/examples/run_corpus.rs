//! Generates a seeded scenario corpus and runs it, as the CLI does.

use opalg::cli::{run_corpus, RunOptions};

fn main() -> opalg::error::Result<()> {
    let dir = std::env::temp_dir().join("opalg-corpus-example");
    std::fs::create_dir_all(&dir)?;
    let out = dir.join("report.json");
    let code = run_corpus(7, 20, &out, &RunOptions::default())?;
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out)?).expect("valid json");
    println!("exit code {code}");
    println!("{}", serde_json::to_string_pretty(&report["summary"]).expect("serializable"));
    Ok(())
}
