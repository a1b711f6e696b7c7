//! Plain-text `key=value` run configuration.
//!
//! One pair per line; `#` starts a comment; blank lines are ignored. Keys not
//! listed in [`KEYS`] are rejected.

use std::fs;
use std::path::Path;

use rcft_core::{MoveRule, NetworkConfig, Point, ProtocolParams};

use crate::error::{CliError, Result};

/// Every accepted key with its default and meaning.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("field_width", "100", "field width (m)"),
    ("field_height", "100", "field height (m)"),
    ("node_count", "100", "number of sensor nodes"),
    ("head_count", "5", "LEACH-C head count"),
    ("bs_x", "50", "base station x (m)"),
    ("bs_y", "500", "base station y (m)"),
    ("data_packet_bits", "2000", "data packet size (bits)"),
    ("control_packet_bits", "200", "control packet size (bits)"),
    ("radio_range", "25", "hop graph radio range (m)"),
    ("initial_energy", "2", "initial battery per node (J)"),
    ("rounds", "20", "rounds per run"),
    ("seed", "1", "seed for single runs"),
    ("e_elec", "5e-8", "electronics energy (J/bit)"),
    ("eps_amp", "1e-10", "amplifier energy (J/bit/m^2)"),
    ("e_da", "5e-9", "aggregation energy (J/bit/signal)"),
    ("p", "0.05", "head fraction for LEACH and RCFT"),
    ("leach_c_iterations", "50", "max LEACH-C swap sweeps"),
    ("rcft_move_rule", "half", "RCFT move rule: half | full"),
    ("rcft_max_passes", "3", "max RCFT re-centering passes"),
];

/// Text of the shipped `default.cfg`.
pub fn default_config_text() -> String {
    let mut s = String::from("# rcft-sim configuration: key=value, '#' starts a comment\n");
    for (key, value, help) in KEYS {
        s.push_str(&format!("\n# {help}\n{key}={value}\n"));
    }
    s
}

fn parse<T: std::str::FromStr>(key: &str, value: &str, at: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("{at}: invalid value {value:?} for key `{key}`")))
}

/// Applies one `key=value` pair. `at` names the source for error messages.
pub fn apply(
    config: &mut NetworkConfig,
    params: &mut ProtocolParams,
    key: &str,
    value: &str,
    at: &str,
) -> Result<()> {
    let value = value.trim();
    match key {
        "field_width" => config.field_width = parse(key, value, at)?,
        "field_height" => config.field_height = parse(key, value, at)?,
        "node_count" => config.node_count = parse(key, value, at)?,
        "head_count" => config.head_count = parse(key, value, at)?,
        "bs_x" => config.bs_pos = Point::new(parse(key, value, at)?, config.bs_pos.y),
        "bs_y" => config.bs_pos = Point::new(config.bs_pos.x, parse(key, value, at)?),
        "data_packet_bits" => config.data_packet_bits = parse(key, value, at)?,
        "control_packet_bits" => config.control_packet_bits = parse(key, value, at)?,
        "radio_range" => config.radio_range = parse(key, value, at)?,
        "initial_energy" => config.initial_energy = parse(key, value, at)?,
        "rounds" => config.rounds = parse(key, value, at)?,
        "seed" => config.seed = parse(key, value, at)?,
        "e_elec" => config.radio.e_elec = parse(key, value, at)?,
        "eps_amp" => config.radio.eps_amp = parse(key, value, at)?,
        "e_da" => config.radio.e_da = parse(key, value, at)?,
        "p" => params.p = parse(key, value, at)?,
        "leach_c_iterations" => params.leach_c_iterations = parse(key, value, at)?,
        "rcft_move_rule" => params.rcft_move_rule = parse::<MoveRule>(key, value, at)?,
        "rcft_max_passes" => params.rcft_max_passes = parse(key, value, at)?,
        _ => return Err(CliError::Usage(format!("{at}: unknown key `{key}`"))),
    }
    Ok(())
}

fn split_pair<'a>(line: &'a str, at: &str) -> Result<(&'a str, &'a str)> {
    line.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| CliError::Usage(format!("{at}: expected key=value, got {line:?}")))
}

/// Parses config text on top of the defaults.
pub fn parse_config(text: &str, source: &str) -> Result<(NetworkConfig, ProtocolParams)> {
    let mut config = NetworkConfig::default();
    let mut params = ProtocolParams::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = format!("{source}:{}", i + 1);
        let (key, value) = split_pair(line, &at)?;
        apply(&mut config, &mut params, key, value, &at)?;
    }
    Ok((config, params))
}

/// Loads `path` (defaults if `None`), applies `overrides` in order and
/// validates the result.
pub fn load_config(
    path: Option<&Path>,
    overrides: &[String],
) -> Result<(NetworkConfig, ProtocolParams)> {
    let (mut config, mut params) = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            parse_config(&text, &p.display().to_string())?
        }
        None => (NetworkConfig::default(), ProtocolParams::default()),
    };
    for o in overrides {
        let at = format!("--set {o}");
        let (key, value) = split_pair(o, &at)?;
        apply(&mut config, &mut params, key, value, &at)?;
    }
    validate(&config, &params)?;
    Ok((config, params))
}

pub fn validate(config: &NetworkConfig, params: &ProtocolParams) -> Result<()> {
    config
        .validate()
        .and_then(|_| params.validate())
        .map_err(|e| CliError::Usage(e.to_string()))
}
