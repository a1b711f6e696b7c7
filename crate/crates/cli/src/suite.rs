//! Batch runs, reports and the reference-experiment preset.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rcft_core::batch::{jobs_for, run_batch};
use rcft_core::metrics::{default_buckets, summarize, write_csv, Bucket, SummaryStats};
use rcft_core::{ExperimentLog, NetworkConfig, Protocol, ProtocolParams};

use crate::charts::write_charts;
use crate::error::{CliError, Result};

/// Rounds per run of the reference preset; quality metrics use the first
/// [`QUALITY_WINDOW`] rounds, energy uses all of them.
pub const SUITE_ROUNDS: usize = 150;
pub const QUALITY_WINDOW: usize = 20;
pub const SUITE_RUNS: usize = 10;

/// Mean head–member distances reported for the three protocols (m).
const PUBLISHED_DISTANCE: [(Protocol, f64); 3] = [
    (Protocol::Leach, 21.11),
    (Protocol::LeachC, 20.68),
    (Protocol::Rcft, 20.88),
];

pub fn run_all(
    config: &NetworkConfig,
    params: &ProtocolParams,
    protocols: &[Protocol],
    seeds: &[u64],
) -> Result<Vec<ExperimentLog>> {
    Ok(run_batch(&jobs_for(config, params, protocols, seeds))?)
}

fn write_text(path: PathBuf, text: &str) -> Result<PathBuf> {
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map(|x| format!("{x:.digits$}"))
        .unwrap_or_else(|| "-".into())
}

/// Human-readable summary. `with_published` adds the published values.
pub fn summary_text(
    stats: &[SummaryStats],
    buckets: &[Bucket],
    quality_window: usize,
    seeds: &[u64],
    with_published: bool,
) -> String {
    let mut s = String::new();
    let rounds = stats
        .iter()
        .map(|x| x.energy_series.len())
        .max()
        .unwrap_or(0);
    let _ = writeln!(
        s,
        "runs per protocol: {} (seeds {:?}); cluster metrics over rounds 1-{quality_window}; energy over rounds 1-{rounds}",
        seeds.len(),
        seeds
    );

    let _ = writeln!(s, "\nmean head-member distance (m)");
    let _ = writeln!(
        s,
        "{:<10}{:>10}{}",
        "protocol",
        "measured",
        if with_published { " published" } else { "" }
    );
    for st in stats {
        let published = PUBLISHED_DISTANCE
            .iter()
            .find(|p| p.0 == st.protocol)
            .map(|p| format!("{:>10.2}", p.1))
            .filter(|_| with_published)
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{:<10}{:>10}{published}",
            st.protocol.as_str(),
            opt(st.mean_member_distance, 2)
        );
    }

    let _ = writeln!(s, "\nmean nodes per cluster (alive / clusters)");
    for st in stats {
        let _ = writeln!(
            s,
            "{:<10}{:>10}",
            st.protocol.as_str(),
            opt(st.mean_nodes_per_cluster, 2)
        );
    }

    let _ = writeln!(
        s,
        "\ncluster size histogram (fraction of clusters by member count)"
    );
    let _ = write!(s, "{:<10}", "protocol");
    for b in buckets {
        let _ = write!(s, "{:>8}", b.label());
    }
    let _ = writeln!(s);
    for st in stats {
        let _ = write!(s, "{:<10}", st.protocol.as_str());
        for f in st.histogram_fractions() {
            let _ = write!(s, "{f:>8.3}");
        }
        let _ = writeln!(s);
    }
    if with_published {
        let _ = writeln!(
            s,
            "published: rcft 16-25 \"almost over 50%\"; leach \"under 10 and over 31 come out frequently\""
        );
    }

    let marks: Vec<usize> = [20, 100, 130, 150]
        .into_iter()
        .filter(|&r| r <= rounds)
        .collect();
    let _ = writeln!(s, "\ncumulative energy per node (J)");
    let _ = write!(s, "{:<10}", "protocol");
    for r in &marks {
        let _ = write!(s, "{:>11}", format!("round {r}"));
    }
    let _ = writeln!(s);
    for st in stats {
        let _ = write!(s, "{:<10}", st.protocol.as_str());
        for &r in &marks {
            let _ = write!(s, "{:>11}", opt(st.energy_at(r - 1), 5));
        }
        let _ = writeln!(s);
    }
    if with_published {
        let _ = writeln!(
            s,
            "published: leach-c saves about 20% vs leach; rcft above leach early, below leach after round 120"
        );
    }
    s
}

/// Writes CSVs, `summary.txt` and the charts for `logs` into `out_dir`.
pub fn write_report(
    out_dir: &Path,
    logs: &[ExperimentLog],
    seeds: &[u64],
    quality_window: usize,
    with_published: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let buckets = default_buckets();
    let stats = summarize(logs, &buckets, quality_window)?;
    let (rounds, clusters) = write_csv(logs, out_dir)?;
    let text = summary_text(&stats, &buckets, quality_window, seeds, with_published);
    let mut files = vec![
        rounds,
        clusters,
        write_text(out_dir.join("summary.txt"), &text)?,
    ];
    files.extend(write_charts(out_dir, &stats, &buckets)?);
    Ok(files)
}

/// All three protocols on the default preset, `seeds` runs each. One
/// 150-round run per (protocol, seed) serves both the 20-round cluster
/// metrics (its first 20 rounds) and the 150-round energy curves.
pub fn run_paper_suite(out_dir: &Path, seeds: &[u64]) -> Result<Vec<PathBuf>> {
    let config = NetworkConfig {
        rounds: SUITE_ROUNDS,
        ..NetworkConfig::default()
    };
    let logs = run_all(&config, &ProtocolParams::default(), &Protocol::ALL, seeds)?;
    write_report(out_dir, &logs, seeds, QUALITY_WINDOW, true)
}
