//! Front end for `rcft-core`: config files, batch comparisons, the
//! reference-experiment preset and SVG charts.

pub mod args;
pub mod charts;
pub mod config;
pub mod error;
pub mod suite;

use std::path::{Path, PathBuf};

use rcft_core::metrics::{default_buckets, read_csv, summarize_rows};

use args::{Command, RunSpec};
use config::load_config;
use error::{CliError, Result};

/// Executes a parsed command line and returns the files written.
pub fn execute(spec: &RunSpec) -> Result<Vec<PathBuf>> {
    match spec.command {
        Command::PaperSuite => suite::run_paper_suite(&spec.out_dir, &spec.seeds),
        Command::Plot => {
            let input = spec.input.as_deref().expect("plot has an input");
            plot(input, &spec.out_dir, spec.quality_window)
        }
        Command::Simulate | Command::Compare => {
            let (mut config, params) = load_config(spec.config.as_deref(), &spec.overrides)?;
            if let Some(r) = spec.rounds {
                config.rounds = r;
            }
            let seeds = if spec.seeds.is_empty() {
                vec![config.seed]
            } else {
                spec.seeds.clone()
            };
            config::validate(&config, &params)?;
            let logs = suite::run_all(&config, &params, &spec.protocols, &seeds)?;
            suite::write_report(&spec.out_dir, &logs, &seeds, spec.quality_window, false)
        }
    }
}

fn plot(input: &Path, out_dir: &Path, quality_window: usize) -> Result<Vec<PathBuf>> {
    let (rounds, clusters) = read_csv(input)?;
    if rounds.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no rounds to plot",
            input.display()
        )));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let buckets = default_buckets();
    let stats = summarize_rows(&rounds, &clusters, &buckets, quality_window)?;
    let mut seeds: Vec<u64> = rounds.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let text = suite::summary_text(&stats, &buckets, quality_window, &seeds, false);
    let summary = out_dir.join("summary.txt");
    std::fs::write(&summary, text).map_err(|e| CliError::io(&summary, e))?;
    let mut files = vec![summary];
    files.extend(charts::write_charts(out_dir, &stats, &buckets)?);
    Ok(files)
}
