//! Static SVG charts: mean cluster size, size histogram, member distance and
//! cumulative energy per protocol.

use std::path::{Path, PathBuf};

use plotters::prelude::*;
use plotters::style::text_anchor::{HPos, Pos, VPos};
use rcft_core::metrics::{Bucket, SummaryStats};
use rcft_core::Protocol;

use crate::error::{CliError, Result};

pub const CHART_FILES: [&str; 4] = [
    "cluster_size.svg",
    "size_histogram.svg",
    "member_distance.svg",
    "energy.svg",
];

const SIZE: (u32, u32) = (720, 480);

fn color(p: Protocol) -> RGBColor {
    match p {
        Protocol::Leach => RGBColor(31, 119, 180),
        Protocol::LeachC => RGBColor(44, 160, 44),
        Protocol::Rcft => RGBColor(214, 39, 40),
    }
}

fn chart_err(path: &Path) -> impl Fn(String) -> CliError + '_ {
    move |message| CliError::Chart {
        path: path.to_path_buf(),
        message,
    }
}

/// One bar per protocol.
fn bars(path: &Path, title: &str, y_desc: &str, values: &[(Protocol, f64)]) -> Result<()> {
    let err = chart_err(path);
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(e.to_string()))?;
    let top = values.iter().map(|v| v.1).fold(0.0, f64::max).max(1e-9) * 1.2;
    let n = values.len();
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(36)
        .y_label_area_size(60)
        .build_cartesian_2d((0..n.saturating_sub(1)).into_segmented(), 0.0..top)
        .map_err(|e| err(e.to_string()))?;
    chart
        .configure_mesh()
        .disable_x_mesh()
        .y_desc(y_desc)
        .x_labels(n)
        .x_label_formatter(&|x| match x {
            SegmentValue::CenterOf(i) => {
                values.get(*i).map(|v| v.0.to_string()).unwrap_or_default()
            }
            _ => String::new(),
        })
        .draw()
        .map_err(|e| err(e.to_string()))?;
    chart
        .draw_series(
            Histogram::vertical(&chart)
                .margin(40)
                .style_func(|x, _| match x {
                    SegmentValue::Exact(i) | SegmentValue::CenterOf(i) => {
                        color(values[*i].0).filled()
                    }
                    SegmentValue::Last => BLACK.filled(),
                })
                .data(values.iter().enumerate().map(|(i, v)| (i, v.1))),
        )
        .map_err(|e| err(e.to_string()))?;
    chart
        .draw_series(values.iter().enumerate().map(|(i, &(_, v))| {
            Text::new(
                format!("{v:.2}"),
                (SegmentValue::CenterOf(i), v + top * 0.05),
                TextStyle::from(("sans-serif", 14).into_font())
                    .pos(Pos::new(HPos::Center, VPos::Bottom)),
            )
        }))
        .map_err(|e| err(e.to_string()))?;
    root.present().map_err(|e| err(e.to_string()))
}

/// Grouped bars: one group per bucket, one bar per protocol, an empty slot
/// between groups.
fn histogram(path: &Path, stats: &[SummaryStats], buckets: &[Bucket]) -> Result<()> {
    let err = chart_err(path);
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(e.to_string()))?;
    let group = stats.len() + 1;
    let slots = buckets.len() * group;
    let mut chart = ChartBuilder::on(&root)
        .caption("Cluster size distribution", ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(36)
        .y_label_area_size(60)
        .build_cartesian_2d((0..slots.saturating_sub(2)).into_segmented(), 0.0..1.0)
        .map_err(|e| err(e.to_string()))?;
    chart
        .configure_mesh()
        .disable_x_mesh()
        .y_desc("fraction of clusters")
        .x_desc("members per cluster")
        .x_labels(slots)
        .x_label_formatter(&|x| match x {
            SegmentValue::CenterOf(i) if i % group == stats.len() / 2 => buckets
                .get(i / group)
                .map(Bucket::label)
                .unwrap_or_default(),
            _ => String::new(),
        })
        .draw()
        .map_err(|e| err(e.to_string()))?;
    for (j, s) in stats.iter().enumerate() {
        let c = color(s.protocol);
        chart
            .draw_series(
                Histogram::vertical(&chart)
                    .margin(1)
                    .style(c.filled())
                    .data(
                        s.histogram_fractions()
                            .into_iter()
                            .enumerate()
                            .map(|(i, f)| (i * group + j, f)),
                    ),
            )
            .map_err(|e| err(e.to_string()))?
            .label(s.protocol.to_string())
            .legend(move |(x, y)| Rectangle::new([(x, y - 5), (x + 10, y + 5)], c.filled()));
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE)
        .draw()
        .map_err(|e| err(e.to_string()))?;
    root.present().map_err(|e| err(e.to_string()))
}

fn energy(path: &Path, stats: &[SummaryStats]) -> Result<()> {
    let err = chart_err(path);
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(e.to_string()))?;
    let rounds = stats
        .iter()
        .map(|s| s.energy_series.len())
        .max()
        .unwrap_or(0)
        .max(1);
    let top = stats
        .iter()
        .flat_map(|s| s.energy_series.iter().copied())
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.1;
    let mut chart = ChartBuilder::on(&root)
        .caption("Cumulative energy per node", ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(36)
        .y_label_area_size(70)
        .build_cartesian_2d(1usize..rounds, 0.0..top)
        .map_err(|e| err(e.to_string()))?;
    chart
        .configure_mesh()
        .x_desc("round")
        .y_desc("energy (J)")
        .draw()
        .map_err(|e| err(e.to_string()))?;
    for s in stats {
        let c = color(s.protocol);
        chart
            .draw_series(LineSeries::new(
                s.energy_series.iter().enumerate().map(|(i, &e)| (i + 1, e)),
                c.stroke_width(2),
            ))
            .map_err(|e| err(e.to_string()))?
            .label(s.protocol.to_string())
            .legend(move |(x, y)| PathElement::new([(x, y), (x + 16, y)], c.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .position(SeriesLabelPosition::UpperLeft)
        .border_style(BLACK)
        .background_style(WHITE)
        .draw()
        .map_err(|e| err(e.to_string()))?;
    root.present().map_err(|e| err(e.to_string()))
}

/// Writes the four charts into `dir` and returns their paths.
pub fn write_charts(
    dir: &Path,
    stats: &[SummaryStats],
    buckets: &[Bucket],
) -> Result<Vec<PathBuf>> {
    let paths: Vec<PathBuf> = CHART_FILES.iter().map(|f| dir.join(f)).collect();
    let sizes: Vec<_> = stats
        .iter()
        .map(|s| (s.protocol, s.mean_nodes_per_cluster.unwrap_or(0.0)))
        .collect();
    bars(&paths[0], "Mean nodes per cluster", "nodes", &sizes)?;
    histogram(&paths[1], stats, buckets)?;
    let dist: Vec<_> = stats
        .iter()
        .map(|s| (s.protocol, s.mean_member_distance.unwrap_or(0.0)))
        .collect();
    bars(
        &paths[2],
        "Mean head-member distance",
        "distance (m)",
        &dist,
    )?;
    energy(&paths[3], stats)?;
    Ok(paths)
}
