//! Cluster formation: LEACH rotation, LEACH-C centralized placement and RCFT
//! hop-based re-centering.

mod assign;
mod leach;
mod leach_c;
mod rcft;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{NodeId, SensorNode};

pub use assign::{assign_by_distance, assign_by_hops};
pub use leach::{leach_elect, LeachHistory};
pub use leach_c::{leach_c_elect, total_distance};
pub use rcft::{
    rcft_form, rcft_pass, rcft_recenter_one, recenter_decisions, Direction, RcftOutcome,
    RecenterDecision, StayReason,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Protocol {
    Leach,
    LeachC,
    Rcft,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Leach, Protocol::LeachC, Protocol::Rcft];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Leach => "leach",
            Protocol::LeachC => "leach-c",
            Protocol::Rcft => "rcft",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "leach" => Ok(Protocol::Leach),
            "leach-c" | "leachc" => Ok(Protocol::LeachC),
            "rcft" => Ok(Protocol::Rcft),
            other => Err(Error::config(
                "protocol",
                format!("unknown protocol {other:?} (expected leach, leach-c or rcft)"),
            )),
        }
    }
}

/// How far an RCFT head walks for a given `tl`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveRule {
    /// `ceil(|tl| / 2)` hops, which lands on the balance point.
    Half,
    /// `|tl|` hops.
    Full,
}

impl MoveRule {
    pub fn steps(self, tl: i64) -> usize {
        let m = tl.unsigned_abs() as usize;
        match self {
            MoveRule::Half => m.div_ceil(2),
            MoveRule::Full => m,
        }
    }
}

impl FromStr for MoveRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half" => Ok(MoveRule::Half),
            "full" => Ok(MoveRule::Full),
            other => Err(Error::config(
                "rcft_move_rule",
                format!("expected half or full, got {other:?}"),
            )),
        }
    }
}

impl fmt::Display for MoveRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveRule::Half => "half",
            MoveRule::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    /// Head fraction `p`.
    pub p: f64,
    /// Upper bound on best-improvement swap sweeps for LEACH-C.
    pub leach_c_iterations: usize,
    pub rcft_move_rule: MoveRule,
    pub rcft_max_passes: usize,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            p: 0.05,
            leach_c_iterations: 50,
            rcft_move_rule: MoveRule::Half,
            rcft_max_passes: 3,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::config(
                "p",
                format!("must lie in (0, 1], got {}", self.p),
            ));
        }
        if self.leach_c_iterations == 0 {
            return Err(Error::config("leach_c_iterations", "must be at least 1"));
        }
        if self.rcft_max_passes == 0 {
            return Err(Error::config("rcft_max_passes", "must be at least 1"));
        }
        Ok(())
    }

    /// LEACH epoch length `ceil(1/p)`.
    pub fn epoch_len(&self) -> usize {
        // nudge so a reciprocal a few ulps above an integer does not round up
        ((1.0 / self.p) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Head set plus member-to-head assignment for one formation.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub heads: BTreeSet<NodeId>,
    pub member_of: BTreeMap<NodeId, NodeId>,
    pub formed_at_round: usize,
    pub protocol: Protocol,
}

impl Clustering {
    pub fn members(&self, head: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.member_of
            .iter()
            .filter(move |&(_, &h)| h == head)
            .map(|(&m, _)| m)
    }

    /// `head -> members` in ascending id order.
    pub fn clusters(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut out: BTreeMap<NodeId, Vec<NodeId>> =
            self.heads.iter().map(|&h| (h, Vec::new())).collect();
        for (&m, &h) in &self.member_of {
            out.entry(h).or_default().push(m);
        }
        out
    }

    /// Every cluster as a sorted node set (head included), ordered by head.
    pub fn node_sets(&self) -> Vec<BTreeSet<NodeId>> {
        self.clusters()
            .into_iter()
            .map(|(h, ms)| ms.into_iter().chain([h]).collect())
            .collect()
    }

    /// Checks the structural invariants against the current node states.
    pub fn validate(&self, nodes: &[SensorNode]) -> Result<()> {
        let alive = |id: NodeId| nodes.iter().any(|n| n.id == id && n.alive);
        if self.heads.is_empty() {
            return Err(Error::InvalidClustering("empty head set".into()));
        }
        for &h in &self.heads {
            if !alive(h) {
                return Err(Error::InvalidClustering(format!("head {h} is not alive")));
            }
            if self.member_of.contains_key(&h) {
                return Err(Error::InvalidClustering(format!(
                    "head {h} is also a member"
                )));
            }
        }
        for (&m, &h) in &self.member_of {
            if !self.heads.contains(&h) {
                return Err(Error::InvalidClustering(format!(
                    "member {m} points at non-head {h}"
                )));
            }
            if !alive(m) {
                return Err(Error::InvalidClustering(format!("member {m} is not alive")));
            }
        }
        for n in nodes.iter().filter(|n| n.alive) {
            if !self.heads.contains(&n.id) && !self.member_of.contains_key(&n.id) {
                return Err(Error::InvalidClustering(format!(
                    "alive node {} is unclustered",
                    n.id
                )));
            }
        }
        Ok(())
    }
}
