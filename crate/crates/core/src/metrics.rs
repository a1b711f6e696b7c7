//! Cluster-quality and energy statistics, and the CSV result format.
//!
//! `rounds.csv` holds one row per (protocol, seed, round) and `clusters.csv`
//! one row per cluster instance. Both are enough to rebuild every summary
//! statistic, which is what [`read_csv`] + [`SummaryAccumulator`] do for the
//! `plot` command.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::engine::ExperimentLog;
use crate::error::{Error, Result};
use crate::model::{NodeId, SensorNode};
use crate::protocols::{Clustering, Protocol};

pub const ROUNDS_HEADER: [&str; 10] = [
    "protocol",
    "seed",
    "round",
    "alive",
    "clusters",
    "mean_cluster_size",
    "mean_member_distance_m",
    "round_energy_j",
    "cum_mean_energy_j",
    "formed",
];

pub const CLUSTERS_HEADER: [&str; 6] = [
    "protocol",
    "seed",
    "round",
    "head_id",
    "members",
    "mean_distance_m",
];

/// Per-cluster snapshot for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStat {
    pub head: NodeId,
    pub members: usize,
    /// Mean head-member distance (m); `None` for a memberless cluster.
    pub mean_distance: Option<f64>,
}

pub fn cluster_stats(clustering: &Clustering, nodes: &[SensorNode]) -> Vec<ClusterStat> {
    let pos = |id: NodeId| {
        nodes
            .iter()
            .find(|n| n.id == id)
            .map(|n| n.pos)
            .expect("clustered node exists")
    };
    clustering
        .clusters()
        .into_iter()
        .map(|(head, members)| {
            let hp = pos(head);
            let mean_distance = (!members.is_empty()).then(|| {
                members.iter().map(|&m| pos(m).distance(hp)).sum::<f64>() / members.len() as f64
            });
            ClusterStat {
                head,
                members: members.len(),
                mean_distance,
            }
        })
        .collect()
}

/// Unweighted mean over clusters of the per-cluster mean head-member
/// distance. Memberless clusters are skipped; `None` if all are memberless.
pub fn mean_member_distance(clustering: &Clustering, nodes: &[SensorNode]) -> Option<f64> {
    mean_of_cluster_means(&cluster_stats(clustering, nodes))
}

/// Same as [`mean_member_distance`] but each cluster weighted by its member
/// count, i.e. the plain mean over all members.
pub fn weighted_member_distance(clustering: &Clustering, nodes: &[SensorNode]) -> Option<f64> {
    let stats = cluster_stats(clustering, nodes);
    let members: usize = stats.iter().map(|c| c.members).sum();
    (members > 0).then(|| {
        stats
            .iter()
            .filter_map(|c| c.mean_distance.map(|d| d * c.members as f64))
            .sum::<f64>()
            / members as f64
    })
}

pub fn mean_of_cluster_means(stats: &[ClusterStat]) -> Option<f64> {
    let ds: Vec<f64> = stats.iter().filter_map(|c| c.mean_distance).collect();
    (!ds.is_empty()).then(|| ds.iter().sum::<f64>() / ds.len() as f64)
}

/// Inclusive member-count range; `hi == None` is open-ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bucket {
    pub lo: usize,
    pub hi: Option<usize>,
}

impl Bucket {
    pub const fn new(lo: usize, hi: Option<usize>) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= self.lo && self.hi.is_none_or(|hi| v <= hi)
    }

    pub fn label(&self) -> String {
        match (self.lo, self.hi) {
            (0, Some(hi)) => format!("<={hi}"),
            (lo, None) => format!(">={lo}"),
            (lo, Some(hi)) => format!("{lo}-{hi}"),
        }
    }
}

pub fn default_buckets() -> Vec<Bucket> {
    vec![
        Bucket::new(0, Some(10)),
        Bucket::new(11, Some(15)),
        Bucket::new(16, Some(25)),
        Bucket::new(26, Some(30)),
        Bucket::new(31, None),
    ]
}

/// Buckets must tile `0..` without gaps or overlaps, in ascending order.
pub fn validate_buckets(buckets: &[Bucket]) -> Result<()> {
    let fail = |why: String| Err(Error::config("buckets", why));
    let Some(first) = buckets.first() else {
        return fail("no buckets".into());
    };
    if first.lo != 0 {
        return fail(format!("first bucket starts at {}, not 0", first.lo));
    }
    for w in buckets.windows(2) {
        match w[0].hi {
            None => return fail(format!("open bucket {} is not last", w[0].label())),
            Some(hi) if hi < w[0].lo => return fail(format!("bucket {} is empty", w[0].label())),
            Some(hi) if w[1].lo <= hi => {
                return fail(format!(
                    "buckets {} and {} overlap",
                    w[0].label(),
                    w[1].label()
                ))
            }
            Some(hi) if w[1].lo > hi + 1 => {
                return fail(format!("gap between {} and {}", w[0].label(), w[1].label()))
            }
            _ => {}
        }
    }
    if buckets.last().is_some_and(|b| b.hi.is_some()) {
        return fail("last bucket must be open-ended".into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeHistogram {
    pub buckets: Vec<Bucket>,
    pub counts: Vec<usize>,
    pub total: usize,
}

impl SizeHistogram {
    pub fn new(buckets: Vec<Bucket>) -> Result<Self> {
        validate_buckets(&buckets)?;
        Ok(Self {
            counts: vec![0; buckets.len()],
            buckets,
            total: 0,
        })
    }

    pub fn add(&mut self, members: usize) {
        let i = self
            .buckets
            .iter()
            .position(|b| b.contains(members))
            .expect("validated buckets cover every count");
        self.counts[i] += 1;
        self.total += 1;
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| {
                if self.total == 0 {
                    0.0
                } else {
                    c as f64 / self.total as f64
                }
            })
            .collect()
    }

    /// Fraction of clusters whose member count falls in `[lo, hi]`. The range
    /// must be a union of whole buckets.
    pub fn fraction_between(&self, lo: usize, hi: Option<usize>) -> f64 {
        let inside: usize = self
            .buckets
            .iter()
            .zip(&self.counts)
            .filter(|(b, _)| {
                b.lo >= lo
                    && match (b.hi, hi) {
                        (_, None) => true,
                        (Some(bh), Some(h)) => bh <= h,
                        (None, Some(_)) => false,
                    }
            })
            .map(|(_, &c)| c)
            .sum();
        if self.total == 0 {
            0.0
        } else {
            inside as f64 / self.total as f64
        }
    }
}

/// Member counts of every cluster in every round of every log.
pub fn size_histogram(logs: &[ExperimentLog], buckets: Vec<Bucket>) -> Result<SizeHistogram> {
    if logs.is_empty() {
        return Err(Error::Domain("size_histogram: no logs".into()));
    }
    let mut h = SizeHistogram::new(buckets)?;
    for c in logs
        .iter()
        .flat_map(|l| &l.reports)
        .flat_map(|r| &r.clusters)
    {
        h.add(c.members);
    }
    Ok(h)
}

/// Cumulative energy spent per initial node, by round.
pub fn energy_series(log: &ExperimentLog) -> Vec<f64> {
    log.reports
        .iter()
        .map(|r| r.cumulative_mean_energy_per_initial_node)
        .collect()
}

/// Aggregated statistics of one protocol over several runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub protocol: Protocol,
    pub runs: usize,
    /// Mean over (run, round) inside the quality window of alive nodes per
    /// cluster, i.e. members plus head.
    pub mean_nodes_per_cluster: Option<f64>,
    /// Per-cluster mean distances pooled uniformly inside the quality window.
    pub mean_member_distance: Option<f64>,
    pub histogram: SizeHistogram,
    /// Cumulative mean energy per node by round, averaged over runs.
    pub energy_series: Vec<f64>,
}

impl SummaryStats {
    pub fn histogram_fractions(&self) -> Vec<f64> {
        self.histogram.fractions()
    }

    pub fn energy_at(&self, round: usize) -> Option<f64> {
        self.energy_series.get(round).copied()
    }
}

/// Streams rounds and cluster instances into a [`SummaryStats`]. Only rounds
/// below `quality_window` count toward the cluster-quality statistics; every
/// round counts toward the energy series.
#[derive(Debug, Clone)]
pub struct SummaryAccumulator {
    protocol: Protocol,
    quality_window: usize,
    runs: BTreeSet<u64>,
    size_sum: f64,
    size_rounds: usize,
    distance_sum: f64,
    distance_count: usize,
    histogram: SizeHistogram,
    energy_sum: Vec<f64>,
    energy_n: Vec<usize>,
}

impl SummaryAccumulator {
    pub fn new(protocol: Protocol, buckets: Vec<Bucket>, quality_window: usize) -> Result<Self> {
        Ok(Self {
            protocol,
            quality_window,
            runs: BTreeSet::new(),
            size_sum: 0.0,
            size_rounds: 0,
            distance_sum: 0.0,
            distance_count: 0,
            histogram: SizeHistogram::new(buckets)?,
            energy_sum: Vec::new(),
            energy_n: Vec::new(),
        })
    }

    /// One round of one run. `nodes_per_cluster` is `alive / clusters`.
    pub fn round(
        &mut self,
        seed: u64,
        round: usize,
        cum_mean_energy: f64,
        nodes_per_cluster: Option<f64>,
    ) {
        self.runs.insert(seed);
        if let Some(size) = nodes_per_cluster.filter(|_| round < self.quality_window) {
            self.size_sum += size;
            self.size_rounds += 1;
        }
        if self.energy_sum.len() <= round {
            self.energy_sum.resize(round + 1, 0.0);
            self.energy_n.resize(round + 1, 0);
        }
        self.energy_sum[round] += cum_mean_energy;
        self.energy_n[round] += 1;
    }

    pub fn cluster(&mut self, round: usize, members: usize, mean_distance: Option<f64>) {
        if round >= self.quality_window {
            return;
        }
        self.histogram.add(members);
        if let Some(d) = mean_distance {
            self.distance_sum += d;
            self.distance_count += 1;
        }
    }

    pub fn log(&mut self, log: &ExperimentLog) {
        for r in &log.reports {
            let size =
                (!r.clusters.is_empty()).then(|| r.alive_count as f64 / r.clusters.len() as f64);
            self.round(
                r.seed,
                r.round,
                r.cumulative_mean_energy_per_initial_node,
                size,
            );
            for c in &r.clusters {
                self.cluster(r.round, c.members, c.mean_distance);
            }
        }
    }

    pub fn finish(self) -> SummaryStats {
        SummaryStats {
            protocol: self.protocol,
            runs: self.runs.len(),
            mean_nodes_per_cluster: (self.size_rounds > 0)
                .then(|| self.size_sum / self.size_rounds as f64),
            mean_member_distance: (self.distance_count > 0)
                .then(|| self.distance_sum / self.distance_count as f64),
            histogram: self.histogram,
            energy_series: self
                .energy_sum
                .iter()
                .zip(&self.energy_n)
                .map(|(s, &n)| s / n.max(1) as f64)
                .collect(),
        }
    }
}

/// One [`SummaryStats`] per protocol present in `logs`, in protocol order.
pub fn summarize(
    logs: &[ExperimentLog],
    buckets: &[Bucket],
    quality_window: usize,
) -> Result<Vec<SummaryStats>> {
    let mut acc: BTreeMap<Protocol, SummaryAccumulator> = BTreeMap::new();
    for log in logs {
        if let Entry::Vacant(e) = acc.entry(log.protocol) {
            e.insert(SummaryAccumulator::new(
                log.protocol,
                buckets.to_vec(),
                quality_window,
            )?);
        }
        acc.get_mut(&log.protocol).expect("inserted").log(log);
    }
    Ok(acc.into_values().map(SummaryAccumulator::finish).collect())
}

/// Formats with 6 significant digits, fixed-point for ordinary magnitudes and
/// exponent notation otherwise.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

fn sorted_logs(logs: &[ExperimentLog]) -> Vec<&ExperimentLog> {
    let mut v: Vec<&ExperimentLog> = logs.iter().collect();
    v.sort_by_key(|l| (l.protocol, l.seed()));
    v
}

fn write_atomically(
    path: &Path,
    fill: impl FnOnce(&mut csv::Writer<File>) -> csv::Result<()>,
) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    let file = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(file);
    let csv_err = |e: csv::Error| Error::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    fill(&mut w).map_err(csv_err)?;
    let mut file = w
        .into_inner()
        .map_err(|e| Error::io(&tmp, e.into_error()))?;
    file.flush().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Writes `rounds.csv` and `clusters.csv` into `dir`, returning both paths.
/// Rows are ordered by (protocol, seed, round, head id).
pub fn write_csv(logs: &[ExperimentLog], dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let logs = sorted_logs(logs);
    let rounds_path = dir.join("rounds.csv");
    write_atomically(&rounds_path, |w| {
        w.write_record(ROUNDS_HEADER)?;
        for log in &logs {
            for r in &log.reports {
                let mean_size = if r.clusters.is_empty() {
                    String::new()
                } else {
                    fmt_sig6(r.alive_count as f64 / r.clusters.len() as f64)
                };
                let dist = mean_of_cluster_means(&r.clusters)
                    .map(fmt_sig6)
                    .unwrap_or_default();
                w.write_record([
                    r.protocol.as_str().to_string(),
                    r.seed.to_string(),
                    r.round.to_string(),
                    r.alive_count.to_string(),
                    r.clusters.len().to_string(),
                    mean_size,
                    dist,
                    fmt_sig6(r.energy_spent_this_round),
                    fmt_sig6(r.cumulative_mean_energy_per_initial_node),
                    u8::from(r.formation_happened).to_string(),
                ])?;
            }
        }
        Ok(())
    })?;
    let clusters_path = dir.join("clusters.csv");
    write_atomically(&clusters_path, |w| {
        w.write_record(CLUSTERS_HEADER)?;
        for log in &logs {
            for r in &log.reports {
                for c in &r.clusters {
                    w.write_record([
                        r.protocol.as_str().to_string(),
                        r.seed.to_string(),
                        r.round.to_string(),
                        c.head.to_string(),
                        c.members.to_string(),
                        c.mean_distance.map(fmt_sig6).unwrap_or_default(),
                    ])?;
                }
            }
        }
        Ok(())
    })?;
    Ok((rounds_path, clusters_path))
}

/// A parsed `rounds.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRow {
    pub protocol: Protocol,
    pub seed: u64,
    pub round: usize,
    pub alive: usize,
    pub clusters: usize,
    pub mean_cluster_size: Option<f64>,
    pub mean_member_distance_m: Option<f64>,
    pub round_energy_j: f64,
    pub cum_mean_energy_j: f64,
    pub formed: bool,
}

/// A parsed `clusters.csv` row.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRow {
    pub protocol: Protocol,
    pub seed: u64,
    pub round: usize,
    pub head_id: NodeId,
    pub members: usize,
    pub mean_distance_m: Option<f64>,
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let bad = |message: String| Error::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let got = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(bad(format!("unexpected header {:?}", got)));
    }
    rdr.records()
        .collect::<csv::Result<Vec<_>>>()
        .map_err(|e| bad(e.to_string()))
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, path: &Path) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Csv {
            path: path.to_path_buf(),
            message: format!("bad value in column {i} of {:?}", rec),
        })
}

fn opt_field(rec: &csv::StringRecord, i: usize, path: &Path) -> Result<Option<f64>> {
    match rec.get(i) {
        Some("") => Ok(None),
        _ => field(rec, i, path).map(Some),
    }
}

/// Reads back both CSV files from `dir`.
pub fn read_csv(dir: &Path) -> Result<(Vec<RoundRow>, Vec<ClusterRow>)> {
    let rp = dir.join("rounds.csv");
    let rounds = read_rows(&rp, &ROUNDS_HEADER)?
        .iter()
        .map(|r| {
            Ok(RoundRow {
                protocol: field(r, 0, &rp)?,
                seed: field(r, 1, &rp)?,
                round: field(r, 2, &rp)?,
                alive: field(r, 3, &rp)?,
                clusters: field(r, 4, &rp)?,
                mean_cluster_size: opt_field(r, 5, &rp)?,
                mean_member_distance_m: opt_field(r, 6, &rp)?,
                round_energy_j: field(r, 7, &rp)?,
                cum_mean_energy_j: field(r, 8, &rp)?,
                formed: field::<u8>(r, 9, &rp)? != 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cp = dir.join("clusters.csv");
    let clusters = read_rows(&cp, &CLUSTERS_HEADER)?
        .iter()
        .map(|r| {
            Ok(ClusterRow {
                protocol: field(r, 0, &cp)?,
                seed: field(r, 1, &cp)?,
                round: field(r, 2, &cp)?,
                head_id: field(r, 3, &cp)?,
                members: field(r, 4, &cp)?,
                mean_distance_m: opt_field(r, 5, &cp)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rounds, clusters))
}

/// [`summarize`] over parsed CSV rows.
pub fn summarize_rows(
    rounds: &[RoundRow],
    clusters: &[ClusterRow],
    buckets: &[Bucket],
    quality_window: usize,
) -> Result<Vec<SummaryStats>> {
    let mut acc: BTreeMap<Protocol, SummaryAccumulator> = BTreeMap::new();
    for p in rounds
        .iter()
        .map(|r| r.protocol)
        .chain(clusters.iter().map(|c| c.protocol))
    {
        if let Entry::Vacant(e) = acc.entry(p) {
            e.insert(SummaryAccumulator::new(
                p,
                buckets.to_vec(),
                quality_window,
            )?);
        }
    }
    for r in rounds {
        acc.get_mut(&r.protocol).expect("inserted").round(
            r.seed,
            r.round,
            r.cum_mean_energy_j,
            r.mean_cluster_size,
        );
    }
    for c in clusters {
        acc.get_mut(&c.protocol)
            .expect("inserted")
            .cluster(c.round, c.members, c.mean_distance_m);
    }
    Ok(acc.into_values().map(SummaryAccumulator::finish).collect())
}
