use std::fs;
use std::path::Path;
use std::process::Command;

use rcft_cli::args::{parse_args, Command as Cmd};
use rcft_cli::charts::CHART_FILES;
use rcft_cli::config::{default_config_text, load_config};
use rcft_core::{NetworkConfig, Protocol, ProtocolParams};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rcft-sim"))
}

#[test]
fn simulate_args() {
    let spec = parse_args([
        "rcft-sim",
        "simulate",
        "--protocol",
        "rcft",
        "--rounds",
        "20",
        "--seed",
        "7",
    ])
    .unwrap();
    assert_eq!(spec.command, Cmd::Simulate);
    assert_eq!(spec.protocols, vec![Protocol::Rcft]);
    assert_eq!(spec.rounds, Some(20));
    assert_eq!(spec.seeds, vec![7]);
}

#[test]
fn compare_args() {
    let spec = parse_args([
        "rcft-sim",
        "compare",
        "--protocols",
        "leach,leach-c,rcft",
        "--seeds",
        "10",
    ])
    .unwrap();
    assert_eq!(spec.command, Cmd::Compare);
    assert_eq!(spec.protocols, Protocol::ALL.to_vec());
    assert_eq!(spec.seeds, (1..=10).collect::<Vec<u64>>());
}

#[test]
fn bad_protocol_is_a_usage_error() {
    let out = bin()
        .args(["simulate", "--protocol", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--protocol"));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = bin().args(["compare", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_lists_config_keys() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("radio_range") && text.contains("Exit codes"),
        "{text}"
    );
}

#[test]
fn config_errors_exit_2_naming_line_and_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "# comment\nrounds=3\nwhatever=1\n").unwrap();
    let out = bin()
        .args(["simulate", "--protocol", "leach", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("bad.cfg:3") && err.contains("whatever"),
        "{err}"
    );

    let out = bin()
        .args(["simulate", "--protocol", "leach", "--set", "head_count=0"])
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("head_count"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn committed_default_cfg_is_the_preset() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../default.cfg");
    assert_eq!(fs::read_to_string(&path).unwrap(), default_config_text());
    let (c, p) = load_config(Some(&path), &[]).unwrap();
    assert_eq!(c, NetworkConfig::default());
    assert_eq!(p, ProtocolParams::default());
}

#[test]
fn simulate_writes_report_inside_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = bin()
        .args([
            "simulate",
            "--protocol",
            "rcft",
            "--rounds",
            "5",
            "--seed",
            "3",
            "--set",
            "radio_range=30",
            "--out",
        ])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rounds = fs::read_to_string(out_dir.join("rounds.csv")).unwrap();
    assert_eq!(rounds.lines().count(), 6);
    assert!(rounds.lines().nth(1).unwrap().starts_with("rcft,3,0,"));
    // nothing escapes the chosen directory
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn paper_suite_artifacts_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = bin()
            .args(["paper-suite", "--out"])
            .arg(d)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for f in CHART_FILES
        .iter()
        .chain(&["rounds.csv", "clusters.csv", "summary.txt"])
    {
        assert!(a.join(f).is_file(), "missing {f}");
    }
    assert_eq!(fs::read_dir(&a).unwrap().count(), 7);
    for f in ["rounds.csv", "clusters.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
    let summary = fs::read_to_string(a.join("summary.txt")).unwrap();
    let leach: f64 = summary
        .lines()
        .find(|l| l.starts_with("leach "))
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|v| v.parse().ok())
        .unwrap();
    assert!((20.1..=22.1).contains(&leach), "{leach}");
    assert!(summary.contains("21.11") && summary.contains("20.68") && summary.contains("20.88"));

    // charts can be redrawn from the CSVs alone
    let plot_dir = dir.path().join("plot");
    let out = bin()
        .args(["plot", "--input"])
        .arg(&a)
        .arg("--out")
        .arg(&plot_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for f in CHART_FILES {
        assert!(plot_dir.join(f).is_file());
    }
}

#[test]
fn plot_without_csv_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["plot", "--input"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
