use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{NodeId, SensorNode};
use crate::rng::RngStream;

/// Sum over alive nodes of the Euclidean distance to the nearest head.
/// Heads contribute zero, so this equals the sum over non-heads.
pub fn total_distance(heads: &BTreeSet<NodeId>, nodes: &[SensorNode]) -> f64 {
    let hp: Vec<_> = nodes
        .iter()
        .filter(|n| heads.contains(&n.id))
        .map(|n| n.pos)
        .collect();
    nodes
        .iter()
        .filter(|n| n.alive)
        .map(|n| {
            hp.iter()
                .map(|&p| n.pos.distance(p))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Centralized head placement.
///
/// Candidates are alive nodes whose energy is at least the alive mean (all
/// alive nodes when fewer than `k` qualify). Starting from `k` uniform
/// candidate draws, the best single head/candidate swap is applied until no
/// swap lowers [`total_distance`] or `iterations` sweeps have run.
pub fn leach_c_elect(
    nodes: &[SensorNode],
    k: usize,
    iterations: usize,
    rng: &mut RngStream,
) -> Result<BTreeSet<NodeId>> {
    let alive: Vec<&SensorNode> = nodes.iter().filter(|n| n.alive).collect();
    if alive.is_empty() {
        return Err(Error::SimulationOver);
    }
    if k == 0 || k > alive.len() {
        return Err(Error::Domain(format!(
            "leach_c_elect: k = {k} with {} alive nodes",
            alive.len()
        )));
    }
    let n = alive.len();
    let mean = alive.iter().map(|a| a.energy).sum::<f64>() / n as f64;
    let threshold = mean - mean.abs() * 1e-12;
    let mut pool: Vec<usize> = (0..n).filter(|&i| alive[i].energy >= threshold).collect();
    if pool.len() < k {
        pool = (0..n).collect();
    }

    let dist: Vec<Vec<f64>> = alive
        .iter()
        .map(|a| alive.iter().map(|b| a.pos.distance(b.pos)).collect())
        .collect();

    let mut heads = rng.choose_distinct(&pool, k);
    heads.sort_unstable();
    let mut is_head = vec![false; n];
    heads.iter().for_each(|&h| is_head[h] = true);

    let mut nearest = vec![0usize; n];
    let mut d1 = vec![0.0f64; n];
    let mut d2 = vec![0.0f64; n];
    let mut corr = vec![0.0f64; k];
    for _ in 0..iterations {
        // nearest and second-nearest head per node
        for v in 0..n {
            let (mut b1, mut b2, mut s) = (f64::INFINITY, f64::INFINITY, 0);
            for (slot, &h) in heads.iter().enumerate() {
                let d = dist[h][v];
                if d < b1 {
                    b2 = b1;
                    b1 = d;
                    s = slot;
                } else if d < b2 {
                    b2 = d;
                }
            }
            nearest[v] = s;
            d1[v] = b1;
            d2[v] = b2;
        }
        let current: f64 = d1.iter().sum();
        let tol = 1e-9 * current.max(1.0);

        let mut best: Option<(f64, usize, usize)> = None;
        for &c in &pool {
            if is_head[c] {
                continue;
            }
            let dc = &dist[c];
            corr.iter_mut().for_each(|x| *x = 0.0);
            let mut base = 0.0;
            for v in 0..n {
                let keep = d1[v].min(dc[v]);
                base += keep;
                corr[nearest[v]] += d2[v].min(dc[v]) - keep;
            }
            for (slot, &delta) in corr.iter().enumerate() {
                let obj = base + delta;
                if obj < current - tol && best.is_none_or(|(b, _, _)| obj < b - tol) {
                    best = Some((obj, slot, c));
                }
            }
        }
        let Some((_, slot, c)) = best else { break };
        is_head[heads[slot]] = false;
        is_head[c] = true;
        heads[slot] = c;
    }
    Ok(heads.into_iter().map(|i| alive[i].id).collect())
}
