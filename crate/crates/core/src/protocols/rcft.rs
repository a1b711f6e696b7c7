//! RCFT: random initial heads, hop-based re-centering, then frozen clusters.
//!
//! For each head, `tl = hops(closest other head) - hops(farthest own member)`.
//! A positive `tl` walks the head toward its closest peer, a negative one
//! toward its farthest member, and `tl == 0` leaves it in place. Heads are
//! nodes, so "moving" hands the head role to the node at the target hop
//! position on the deterministic shortest path.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{NodeId, SensorNode};
use crate::rng::RngStream;
use crate::topology::{farthest_member, hop_distances, shortest_path, ConnectivityGraph};

use super::{assign_by_hops, Clustering, Protocol, ProtocolParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    TowardClosestHead,
    TowardFarthestMember,
    Stay,
}

/// Why a head stayed without evaluating `tl`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StayReason {
    NoPeer,
    NoMembers,
    UnreachablePeer,
    UnreachableMembers,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecenterDecision {
    pub head: NodeId,
    pub closest_head: Option<NodeId>,
    pub closest_head_hops: Option<u32>,
    pub farthest_member: Option<NodeId>,
    pub farthest_member_hops: Option<u32>,
    pub tl: i64,
    pub direction: Direction,
    pub steps_moved: usize,
    pub new_head: NodeId,
    pub stay_reason: Option<StayReason>,
}

impl RecenterDecision {
    fn stay(head: NodeId, reason: StayReason) -> Self {
        Self {
            head,
            closest_head: None,
            closest_head_hops: None,
            farthest_member: None,
            farthest_member_hops: None,
            tl: 0,
            direction: Direction::Stay,
            steps_moved: 0,
            new_head: head,
            stay_reason: Some(reason),
        }
    }

    pub fn moved(&self) -> bool {
        self.new_head != self.head
    }

    /// Checks the sign/direction relation and the step bound.
    pub fn check(&self) -> Result<()> {
        let bad = |why: &str| {
            Err(Error::Domain(format!(
                "decision for head {}: {why}",
                self.head
            )))
        };
        if let (Some(c), Some(f)) = (self.closest_head_hops, self.farthest_member_hops) {
            if self.tl != i64::from(c) - i64::from(f) {
                return bad("tl is not closest - farthest");
            }
        }
        let expected = match self.tl.signum() {
            1 => Direction::TowardClosestHead,
            -1 => Direction::TowardFarthestMember,
            _ => Direction::Stay,
        };
        if self.direction != expected {
            return bad("direction does not match the sign of tl");
        }
        if self.direction == Direction::Stay && (self.moved() || self.steps_moved != 0) {
            return bad("STAY decision moved");
        }
        if self.steps_moved as u64 > self.tl.unsigned_abs() {
            return bad("moved further than |tl|");
        }
        if (self.steps_moved == 0) != !self.moved() {
            return bad("steps_moved disagrees with new_head");
        }
        Ok(())
    }
}

/// Re-centering decision for one head against the current head set.
pub fn rcft_recenter_one(
    head: NodeId,
    peers: &BTreeSet<NodeId>,
    clustering: &Clustering,
    graph: &ConnectivityGraph,
    params: &ProtocolParams,
) -> Result<RecenterDecision> {
    if !peers.contains(&head) {
        return Err(Error::Domain(format!("node {head} is not a head")));
    }
    if peers.len() < 2 {
        return Ok(RecenterDecision::stay(head, StayReason::NoPeer));
    }
    let members: Vec<NodeId> = clustering
        .members(head)
        .filter(|m| !peers.contains(m))
        .collect();
    if members.is_empty() {
        return Ok(RecenterDecision::stay(head, StayReason::NoMembers));
    }
    let field = hop_distances(graph, head)?;
    let closest = peers
        .iter()
        .filter(|&&h| h != head)
        .filter_map(|&h| field.get(h).map(|d| (d, h)))
        .min();
    let Some((closest_hops, closest)) = closest else {
        return Ok(RecenterDecision::stay(head, StayReason::UnreachablePeer));
    };
    let Ok((far, far_hops)) = farthest_member(&field, members) else {
        return Ok(RecenterDecision::stay(head, StayReason::UnreachableMembers));
    };

    let tl = i64::from(closest_hops) - i64::from(far_hops);
    let (direction, target) = match tl.signum() {
        1 => (Direction::TowardClosestHead, closest),
        -1 => (Direction::TowardFarthestMember, far),
        _ => (Direction::Stay, head),
    };
    let mut steps_moved = 0;
    let mut new_head = head;
    if direction != Direction::Stay {
        let path = shortest_path(graph, head, target)?;
        let mut idx = params.rcft_move_rule.steps(tl).min(path.len() - 1);
        // never land on another head; back off along the path instead
        while idx > 0 && peers.contains(&path[idx]) {
            idx -= 1;
        }
        steps_moved = idx;
        new_head = path[idx];
    }
    Ok(RecenterDecision {
        head,
        closest_head: Some(closest),
        closest_head_hops: Some(closest_hops),
        farthest_member: Some(far),
        farthest_member_hops: Some(far_hops),
        tl,
        direction,
        steps_moved,
        new_head,
        stay_reason: None,
    })
}

/// Decisions for every head against one hop assignment, without moving
/// anything. Useful for inspecting `tl` at a given head set.
pub fn recenter_decisions(
    heads: &BTreeSet<NodeId>,
    graph: &ConnectivityGraph,
    nodes: &[SensorNode],
    params: &ProtocolParams,
) -> Result<Vec<RecenterDecision>> {
    let clustering = assign_by_hops(heads, graph, nodes, Protocol::Rcft, 0)?;
    heads
        .iter()
        .map(|&h| rcft_recenter_one(h, heads, &clustering, graph, params))
        .collect()
}

/// One re-centering pass: assign by hops, then move each head in ascending
/// id order, each seeing the head set as already updated by earlier moves.
pub fn rcft_pass(
    heads: &BTreeSet<NodeId>,
    graph: &ConnectivityGraph,
    nodes: &[SensorNode],
    params: &ProtocolParams,
) -> Result<(BTreeSet<NodeId>, Vec<RecenterDecision>)> {
    let clustering = assign_by_hops(heads, graph, nodes, Protocol::Rcft, 0)?;
    let mut current = heads.clone();
    let mut decisions = Vec::with_capacity(heads.len());
    for &h in heads {
        let d = rcft_recenter_one(h, &current, &clustering, graph, params)?;
        if d.moved() {
            current.remove(&h);
            current.insert(d.new_head);
        }
        decisions.push(d);
    }
    Ok((current, decisions))
}

#[derive(Debug, Clone)]
pub struct RcftOutcome {
    pub clustering: Clustering,
    pub initial_heads: BTreeSet<NodeId>,
    /// Decisions of every executed pass, in order.
    pub passes: Vec<Vec<RecenterDecision>>,
}

/// Full RCFT formation: random draw of `round(p·alive)` heads, up to
/// `rcft_max_passes` re-centering passes (stopping early once no head
/// moves), then a final hop assignment.
pub fn rcft_form(
    nodes: &[SensorNode],
    graph: &ConnectivityGraph,
    params: &ProtocolParams,
    rng: &mut RngStream,
    round: usize,
) -> Result<RcftOutcome> {
    let alive: Vec<NodeId> = nodes.iter().filter(|n| n.alive).map(|n| n.id).collect();
    if alive.is_empty() {
        return Err(Error::SimulationOver);
    }
    let k = ((params.p * alive.len() as f64).round() as usize).max(1);
    if k > alive.len() {
        return Err(Error::Domain(format!(
            "rcft_form: {k} heads requested with {} alive nodes",
            alive.len()
        )));
    }
    let initial_heads: BTreeSet<NodeId> = rng.choose_distinct(&alive, k).into_iter().collect();
    let mut heads = initial_heads.clone();
    let mut passes = Vec::new();
    for _ in 0..params.rcft_max_passes {
        let (next, decisions) = rcft_pass(&heads, graph, nodes, params)?;
        passes.push(decisions);
        let moved = next != heads;
        heads = next;
        if !moved {
            break;
        }
    }
    let clustering = assign_by_hops(&heads, graph, nodes, Protocol::Rcft, round)?;
    Ok(RcftOutcome {
        clustering,
        initial_heads,
        passes,
    })
}
