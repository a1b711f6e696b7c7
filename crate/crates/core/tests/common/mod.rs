//! Brute-force oracles and instance generators shared by the integration
//! tests. Nothing here calls into the library's algorithms.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rcft_core::{NodeId, Point, RngStream, SensorNode};

/// All-pairs unit-weight distances; `None` means unreachable.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<u32>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(a, b) in edges {
        if a != b {
            d[a][b] = Some(1);
            d[b][a] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|ij| ik + kj < ij) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Edge list of the unit-disk graph over alive nodes, by direct pair check.
pub fn unit_disk_edges(nodes: &[SensorNode], range: f64) -> BTreeSet<(NodeId, NodeId)> {
    let mut out = BTreeSet::new();
    for a in nodes.iter().filter(|n| n.alive) {
        for b in nodes.iter().filter(|n| n.alive) {
            if a.id < b.id {
                let dx = a.pos.x - b.pos.x;
                let dy = a.pos.y - b.pos.y;
                if (dx * dx + dy * dy).sqrt() <= range {
                    out.insert((a.id, b.id));
                }
            }
        }
    }
    out
}

pub fn dist(a: Point, b: Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

/// Nearest head by Euclidean distance, lowest id on ties.
pub fn brute_nearest(p: Point, heads: &[(NodeId, Point)]) -> NodeId {
    let mut sorted = heads.to_vec();
    sorted.sort_by_key(|h| h.0);
    let best = sorted
        .iter()
        .map(|h| dist(p, h.1))
        .fold(f64::INFINITY, f64::min);
    sorted.iter().find(|h| dist(p, h.1) == best).unwrap().0
}

/// Min-hop head via all-pairs distances; ties by Euclidean distance, then
/// lowest id; unreachable nodes fall back to the nearest head.
pub fn brute_min_hop(
    node: &SensorNode,
    heads: &[(NodeId, Point)],
    apsp: &[Vec<Option<u32>>],
) -> NodeId {
    let mut cands: Vec<(u32, f64, NodeId)> = heads
        .iter()
        .filter_map(|&(h, hp)| apsp[node.id][h].map(|d| (d, dist(node.pos, hp), h)))
        .collect();
    if cands.is_empty() {
        return brute_nearest(node.pos, heads);
    }
    let min_hops = cands.iter().map(|c| c.0).min().unwrap();
    cands.retain(|c| c.0 == min_hops);
    let min_e = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    cands.retain(|c| c.1 == min_e);
    cands.iter().map(|c| c.2).min().unwrap()
}

/// Sum over alive nodes of the distance to the nearest head.
pub fn kmedian_cost(nodes: &[SensorNode], heads: &[NodeId]) -> f64 {
    nodes
        .iter()
        .filter(|n| n.alive)
        .map(|n| {
            heads
                .iter()
                .map(|&h| dist(n.pos, nodes[h].pos))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

fn combinations(
    pool: &[NodeId],
    k: usize,
    start: usize,
    cur: &mut Vec<NodeId>,
    out: &mut Vec<Vec<NodeId>>,
) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        combinations(pool, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Exhaustive LEACH-C optimum: every k-subset of the candidate pool
/// (alive nodes with energy at least the alive mean, or all alive nodes if
/// fewer than k qualify). Returns the optimal cost.
pub fn exhaustive_leach_c(nodes: &[SensorNode], k: usize) -> f64 {
    let alive: Vec<&SensorNode> = nodes.iter().filter(|n| n.alive).collect();
    let mean = alive.iter().map(|n| n.energy).sum::<f64>() / alive.len() as f64;
    let mut pool: Vec<NodeId> = alive
        .iter()
        .filter(|n| n.energy >= mean - mean.abs() * 1e-12)
        .map(|n| n.id)
        .collect();
    if pool.len() < k {
        pool = alive.iter().map(|n| n.id).collect();
    }
    let mut subsets = Vec::new();
    combinations(&pool, k, 0, &mut Vec::new(), &mut subsets);
    subsets
        .iter()
        .map(|s| kmedian_cost(nodes, s))
        .fold(f64::INFINITY, f64::min)
}

pub fn random_nodes(rng: &mut RngStream, n: usize, side: f64) -> Vec<SensorNode> {
    (0..n)
        .map(|id| {
            let x = rng.uniform_in(0.0, side);
            let y = rng.uniform_in(0.0, side);
            SensorNode::new(id, Point::new(x, y), 1.0 + rng.uniform())
        })
        .collect()
}

/// Random graph on `n` nodes with edge probability `p`.
pub fn random_edges(rng: &mut RngStream, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.uniform() < p {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Nodes at x = 0, 1, ..., len-1 on a line.
pub fn line_nodes(len: usize) -> Vec<SensorNode> {
    (0..len)
        .map(|i| SensorNode::new(i, Point::new(i as f64, 0.0), 1.0))
        .collect()
}
