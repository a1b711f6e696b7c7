use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{NodeId, SensorNode};
use crate::rng::RngStream;

use super::ProtocolParams;

/// Round in which each node last served as head.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LeachHistory {
    last_head_round: Vec<Option<usize>>,
}

impl LeachHistory {
    pub fn new(node_count: usize) -> Self {
        Self {
            last_head_round: vec![None; node_count],
        }
    }

    pub fn last_head_round(&self, id: NodeId) -> Option<usize> {
        self.last_head_round.get(id).copied().flatten()
    }

    fn record(&mut self, id: NodeId, round: usize) {
        if id >= self.last_head_round.len() {
            self.last_head_round.resize(id + 1, None);
        }
        self.last_head_round[id] = Some(round);
    }

    /// True when `id` has not been head in the epoch containing `round`.
    pub fn eligible(&self, id: NodeId, round: usize, epoch_len: usize) -> bool {
        self.last_head_round(id)
            .is_none_or(|last| last / epoch_len != round / epoch_len)
    }
}

/// LEACH threshold `T(n) = p / (1 - p·(r mod E))` for epoch-eligible nodes.
fn threshold(p: f64, round: usize, epoch_len: usize) -> f64 {
    let pos = (round % epoch_len) as f64;
    if pos + 1.0 >= epoch_len as f64 {
        return 1.0;
    }
    let t = p / (1.0 - p * pos);
    if t.is_finite() && t < 1.0 {
        t
    } else {
        1.0
    }
}

/// LEACH rotating self-election.
///
/// Each alive node that has not been head in the current epoch draws once
/// against `T(n)`. Nodes drawn in order of id so the stream is consumed
/// deterministically. An empty draw forces the highest-energy eligible node
/// (lowest id on ties); if nobody is eligible any alive node may be forced.
pub fn leach_elect(
    nodes: &[SensorNode],
    round: usize,
    params: &ProtocolParams,
    history: &mut LeachHistory,
    rng: &mut RngStream,
) -> Result<BTreeSet<NodeId>> {
    let alive: Vec<&SensorNode> = nodes.iter().filter(|n| n.alive).collect();
    if alive.is_empty() {
        return Err(Error::SimulationOver);
    }
    let epoch = params.epoch_len();
    let t = threshold(params.p, round, epoch);
    let mut heads = BTreeSet::new();
    let mut eligible = Vec::new();
    for n in &alive {
        if history.eligible(n.id, round, epoch) {
            eligible.push(*n);
            if rng.uniform() < t {
                heads.insert(n.id);
            }
        }
    }
    if heads.is_empty() {
        let pool = if eligible.is_empty() {
            &alive
        } else {
            &eligible
        };
        let forced = pool
            .iter()
            .max_by(|a, b| a.energy.total_cmp(&b.energy).then(b.id.cmp(&a.id)))
            .expect("pool is non-empty");
        heads.insert(forced.id);
    }
    for &h in &heads {
        history.record(h, round);
    }
    Ok(heads)
}
