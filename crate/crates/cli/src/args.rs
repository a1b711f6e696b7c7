//! Command-line parsing.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rcft_core::batch::{seed_list, SEED_BASE};
use rcft_core::Protocol;

use crate::config::KEYS;
use crate::suite::{QUALITY_WINDOW, SUITE_RUNS};

fn keys_help() -> String {
    let mut s = String::from("Config keys (file lines or --set key=value), with defaults:\n");
    for (k, v, help) in KEYS {
        s.push_str(&format!("  {k:<22}{v:<8}{help}\n"));
    }
    s.push_str(&format!(
        "\n--seeds N runs N consecutive seeds starting at {SEED_BASE}.\n\
         Exit codes: 0 ok, 1 runtime failure, 2 usage or configuration error."
    ));
    s
}

#[derive(Debug, Parser)]
#[command(name = "rcft-sim", version, about = "LEACH / LEACH-C / RCFT sensor-network clustering simulator", after_long_help = keys_help())]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// key=value config file (defaults to the built-in preset)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one config key; repeatable, applied after --config
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run one protocol on one seed
    Simulate {
        #[arg(long)]
        protocol: Protocol,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run several protocols over N seeds and summarize
    Compare {
        /// Comma-separated protocol list
        #[arg(long, value_delimiter = ',', default_value = "leach,leach-c,rcft")]
        protocols: Vec<Protocol>,
        /// Number of runs per protocol
        #[arg(long, default_value_t = SUITE_RUNS)]
        seeds: usize,
        #[arg(long)]
        rounds: Option<usize>,
        /// Rounds counted by the cluster-quality metrics
        #[arg(long, default_value_t = QUALITY_WINDOW)]
        quality_window: usize,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Reproduce the published experiment: CSVs, summary.txt and charts
    PaperSuite {
        #[arg(long, default_value_t = SUITE_RUNS)]
        seeds: usize,
        #[arg(long, default_value = "paper-suite")]
        out: PathBuf,
    },
    /// Redraw charts and summary from existing CSVs
    Plot {
        /// Directory holding rounds.csv and clusters.csv
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = QUALITY_WINDOW)]
        quality_window: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Compare,
    PaperSuite,
    Plot,
}

/// A validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub out_dir: PathBuf,
    pub input: Option<PathBuf>,
    pub protocols: Vec<Protocol>,
    /// Empty means "the seed in the config".
    pub seeds: Vec<u64>,
    pub rounds: Option<usize>,
    pub quality_window: usize,
}

pub fn parse_args<I, T>(argv: I) -> Result<RunSpec, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    Ok(match cli.command {
        Cmd::Simulate {
            protocol,
            rounds,
            seed,
            cfg,
            out,
        } => RunSpec {
            command: Command::Simulate,
            config: cfg.config,
            overrides: cfg.overrides,
            out_dir: out,
            input: None,
            protocols: vec![protocol],
            seeds: seed.into_iter().collect(),
            rounds,
            quality_window: QUALITY_WINDOW,
        },
        Cmd::Compare {
            protocols,
            seeds,
            rounds,
            quality_window,
            cfg,
            out,
        } => RunSpec {
            command: Command::Compare,
            config: cfg.config,
            overrides: cfg.overrides,
            out_dir: out,
            input: None,
            protocols,
            seeds: seed_list(seeds),
            rounds,
            quality_window,
        },
        Cmd::PaperSuite { seeds, out } => RunSpec {
            command: Command::PaperSuite,
            config: None,
            overrides: Vec::new(),
            out_dir: out,
            input: None,
            protocols: Protocol::ALL.to_vec(),
            seeds: seed_list(seeds),
            rounds: None,
            quality_window: QUALITY_WINDOW,
        },
        Cmd::Plot {
            input,
            quality_window,
            out,
        } => RunSpec {
            command: Command::Plot,
            config: None,
            overrides: Vec::new(),
            out_dir: out.unwrap_or_else(|| input.clone()),
            input: Some(input),
            protocols: Vec::new(),
            seeds: Vec::new(),
            rounds: None,
            quality_window,
        },
    })
}
