//! Field geometry, node state, experiment configuration and the first-order
//! radio energy model.

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorNode {
    pub id: NodeId,
    pub pos: Point,
    /// Residual energy in joules.
    pub energy: f64,
    pub alive: bool,
}

impl SensorNode {
    pub fn new(id: NodeId, pos: Point, energy: f64) -> Self {
        Self {
            id,
            pos,
            energy,
            alive: energy > 0.0,
        }
    }

    /// Draws up to `amount` joules and returns what was actually drawn.
    /// Energy floors at zero; the alive flag is only cleared by the engine at
    /// round end.
    pub fn spend(&mut self, amount: f64) -> f64 {
        debug_assert!(amount >= 0.0 && amount.is_finite());
        let drawn = amount.min(self.energy).max(0.0);
        self.energy -= drawn;
        if self.energy < 0.0 {
            self.energy = 0.0;
        }
        drawn
    }
}

/// First-order radio model constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioModel {
    /// Electronics energy per bit, spent on both transmit and receive (J/bit).
    pub e_elec: f64,
    /// Free-space amplifier energy (J/bit/m²).
    pub eps_amp: f64,
    /// Aggregation energy per bit per signal at a head (J/bit).
    pub e_da: f64,
}

impl Default for RadioModel {
    fn default() -> Self {
        Self {
            e_elec: 50e-9,
            eps_amp: 100e-12,
            e_da: 5e-9,
        }
    }
}

impl RadioModel {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("e_elec", self.e_elec),
            ("eps_amp", self.eps_amp),
            ("e_da", self.e_da),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(
                    field,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// `e_elec·k + eps_amp·k·d²`.
    pub fn tx_energy(&self, bits: u64, distance: f64) -> Result<f64> {
        if !(distance.is_finite() && distance >= 0.0) {
            return Err(Error::Domain(format!(
                "transmit distance must be finite and non-negative, got {distance}"
            )));
        }
        let k = bits as f64;
        Ok(self.e_elec * k + self.eps_amp * k * distance * distance)
    }

    /// `e_elec·k`.
    pub fn rx_energy(&self, bits: u64) -> f64 {
        self.e_elec * bits as f64
    }

    /// `e_da·k·signals`.
    pub fn aggregate_energy(&self, bits: u64, signals: u64) -> f64 {
        self.e_da * bits as f64 * signals as f64
    }
}

/// Network and experiment parameters. `Default` is the 100-node,
/// 100 m × 100 m, 5-head preset with the base station at (50, 500).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub field_width: f64,
    pub field_height: f64,
    pub node_count: usize,
    pub head_count: usize,
    pub bs_pos: Point,
    pub data_packet_bits: u64,
    pub control_packet_bits: u64,
    /// Unit-disk radius that induces the hop graph (m).
    pub radio_range: f64,
    /// Energy per node at round 0 (J).
    pub initial_energy: f64,
    pub rounds: usize,
    pub seed: u64,
    pub radio: RadioModel,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            field_width: 100.0,
            field_height: 100.0,
            node_count: 100,
            head_count: 5,
            bs_pos: Point::new(50.0, 500.0),
            data_packet_bits: 2000,
            control_packet_bits: 200,
            radio_range: 25.0,
            initial_energy: 2.0,
            rounds: 20,
            seed: 1,
            radio: RadioModel::default(),
        }
    }
}

impl NetworkConfig {
    /// Fraction of nodes that act as heads, `head_count / node_count`.
    pub fn head_fraction(&self) -> f64 {
        if self.node_count == 0 {
            0.0
        } else {
            self.head_count as f64 / self.node_count as f64
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |field: &'static str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("field_width", self.field_width)?;
        positive("field_height", self.field_height)?;
        positive("radio_range", self.radio_range)?;
        positive("initial_energy", self.initial_energy)?;
        if !(self.bs_pos.x.is_finite() && self.bs_pos.y.is_finite()) {
            return Err(Error::config("bs_pos", "coordinates must be finite"));
        }
        if self.head_count == 0 {
            return Err(Error::config("head_count", "must be at least 1"));
        }
        if self.node_count > 0 && self.head_count > self.node_count {
            return Err(Error::config(
                "head_count",
                format!(
                    "must not exceed node_count ({} > {})",
                    self.head_count, self.node_count
                ),
            ));
        }
        if self.data_packet_bits == 0 {
            return Err(Error::config("data_packet_bits", "must be positive"));
        }
        self.radio.validate()
    }
}

/// Places `node_count` nodes i.i.d. uniformly over the field, all at full
/// energy.
pub fn generate_field(config: &NetworkConfig, rng: &mut RngStream) -> Result<Vec<SensorNode>> {
    config.validate()?;
    Ok((0..config.node_count)
        .map(|id| {
            let x = rng.uniform_in(0.0, config.field_width);
            let y = rng.uniform_in(0.0, config.field_height);
            SensorNode::new(id, Point::new(x, y), config.initial_energy)
        })
        .collect())
}
