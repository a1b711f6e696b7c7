//! Unit-disk connectivity over alive nodes and hop-count math.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{NodeId, SensorNode};

/// Undirected graph indexed by node id. Neighbor lists are sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityGraph {
    nodes: Vec<NodeId>,
    present: Vec<bool>,
    adjacency: Vec<Vec<NodeId>>,
    range: Option<f64>,
}

impl ConnectivityGraph {
    fn with_capacity(nodes: Vec<NodeId>) -> Self {
        let len = nodes.iter().max().map_or(0, |&m| m + 1);
        let mut present = vec![false; len];
        for &id in &nodes {
            present[id] = true;
        }
        Self {
            nodes,
            present,
            adjacency: vec![Vec::new(); len],
            range: None,
        }
    }

    /// Abstract graph over ids `0..node_count` with the given undirected
    /// edges. Self-loops and duplicate edges are ignored.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut g = Self::with_capacity((0..node_count).collect());
        g.present.resize(node_count, false);
        g.adjacency.resize(node_count, Vec::new());
        for &(a, b) in edges {
            if a >= node_count {
                return Err(Error::UnknownNode(a));
            }
            if b >= node_count {
                return Err(Error::UnknownNode(b));
            }
            if a != b {
                g.adjacency[a].push(b);
                g.adjacency[b].push(a);
            }
        }
        for adj in &mut g.adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(g)
    }

    /// Path graph `0 - 1 - ... - (len-1)`.
    pub fn path(len: usize) -> Self {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_edges(len, &edges).expect("path edges are in range")
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn range(&self) -> Option<f64> {
        self.range
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.present.get(id).copied().unwrap_or(false)
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        if self.contains(id) {
            &self.adjacency[id]
        } else {
            &[]
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn check(&self, id: NodeId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::UnknownNode(id))
        }
    }

    /// Raw BFS from `source`; `None` marks unreachable or absent ids.
    fn bfs(&self, source: NodeId) -> Vec<Option<u32>> {
        let mut hops = vec![None; self.present.len()];
        hops[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let next = hops[u].expect("queued nodes are labelled") + 1;
            for &v in &self.adjacency[u] {
                if hops[v].is_none() {
                    hops[v] = Some(next);
                    queue.push_back(v);
                }
            }
        }
        hops
    }
}

/// Unit-disk graph over the alive nodes: an edge joins two distinct nodes
/// whose Euclidean distance is at most `range`.
pub fn build_graph(nodes: &[SensorNode], range: f64) -> ConnectivityGraph {
    let alive: Vec<&SensorNode> = nodes.iter().filter(|n| n.alive).collect();
    let mut ids: Vec<NodeId> = alive.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    let mut g = ConnectivityGraph::with_capacity(ids);
    g.range = Some(range);
    let r2 = range * range;
    for (i, a) in alive.iter().enumerate() {
        for b in &alive[i + 1..] {
            if a.id != b.id && a.pos.distance_sq(b.pos) <= r2 {
                g.adjacency[a.id].push(b.id);
                g.adjacency[b.id].push(a.id);
            }
        }
    }
    for adj in &mut g.adjacency {
        adj.sort_unstable();
    }
    g
}

/// Breadth-first hop counts from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopField {
    source: NodeId,
    hops: Vec<Option<u32>>,
}

impl HopField {
    pub fn source(&self) -> NodeId {
        self.source
    }

    /// Hop count to `id`, or `None` when unreachable.
    pub fn get(&self, id: NodeId) -> Option<u32> {
        self.hops.get(id).copied().flatten()
    }

    /// Reachable `(id, hops)` pairs in ascending id order.
    pub fn reachable(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.hops
            .iter()
            .enumerate()
            .filter_map(|(id, h)| h.map(|h| (id, h)))
    }
}

pub fn hop_distances(graph: &ConnectivityGraph, source: NodeId) -> Result<HopField> {
    graph.check(source)?;
    Ok(HopField {
        source,
        hops: graph.bfs(source),
    })
}

/// The deterministic shortest hop path `from → target`, both ends included.
///
/// The path descends the BFS field rooted at `target`, always stepping to
/// the lowest-id neighbor one hop closer.
pub fn shortest_path(
    graph: &ConnectivityGraph,
    from: NodeId,
    target: NodeId,
) -> Result<Vec<NodeId>> {
    graph.check(from)?;
    graph.check(target)?;
    let field = graph.bfs(target);
    let Some(mut remaining) = field[from] else {
        return Err(Error::Unreachable { from, target });
    };
    let mut path = Vec::with_capacity(remaining as usize + 1);
    let mut at = from;
    path.push(at);
    while remaining > 0 {
        at = *graph.adjacency[at]
            .iter()
            .find(|&&v| field[v] == Some(remaining - 1))
            .expect("BFS field always has a predecessor");
        remaining -= 1;
        path.push(at);
    }
    Ok(path)
}

/// Node reached after `steps` hops along [`shortest_path`]; overshoot clamps
/// to `target`.
pub fn step_toward(
    graph: &ConnectivityGraph,
    from: NodeId,
    target: NodeId,
    steps: usize,
) -> Result<NodeId> {
    let path = shortest_path(graph, from, target)?;
    Ok(path[steps.min(path.len() - 1)])
}

/// Member with the largest reachable hop count; ties go to the highest id,
/// standing in for "the last responder".
pub fn farthest_member(
    hops: &HopField,
    members: impl IntoIterator<Item = NodeId>,
) -> Result<(NodeId, u32)> {
    let mut any = false;
    let mut best: Option<(NodeId, u32)> = None;
    for m in members {
        any = true;
        if let Some(h) = hops.get(m) {
            best = match best {
                Some((bid, bh)) if (bh, bid) >= (h, m) => Some((bid, bh)),
                _ => Some((m, h)),
            };
        }
    }
    match best {
        Some(b) => Ok(b),
        None if !any => Err(Error::Domain("farthest_member: empty member set".into())),
        None => Err(Error::Domain(format!(
            "farthest_member: no member is reachable from node {}",
            hops.source
        ))),
    }
}
