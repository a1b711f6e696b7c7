use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{NodeId, Point, SensorNode};
use crate::topology::{hop_distances, ConnectivityGraph};

use super::{Clustering, Protocol};

fn head_positions(heads: &BTreeSet<NodeId>, nodes: &[SensorNode]) -> Result<Vec<(NodeId, Point)>> {
    if heads.is_empty() {
        return Err(Error::Domain(
            "cannot assign members to an empty head set".into(),
        ));
    }
    heads
        .iter()
        .map(|&h| match nodes.iter().find(|n| n.id == h) {
            Some(n) if n.alive => Ok((h, n.pos)),
            Some(_) => Err(Error::Domain(format!("head {h} is dead"))),
            None => Err(Error::UnknownNode(h)),
        })
        .collect()
}

/// Euclidean-nearest head; ties go to the lowest head id.
fn nearest_head(pos: Point, heads: &[(NodeId, Point)]) -> NodeId {
    let mut best = heads[0];
    let mut best_d = pos.distance_sq(best.1);
    for &(h, hp) in &heads[1..] {
        let d = pos.distance_sq(hp);
        if d < best_d {
            best = (h, hp);
            best_d = d;
        }
    }
    best.0
}

/// Every alive non-head joins its Euclidean-nearest head (lowest id on ties).
pub fn assign_by_distance(
    heads: &BTreeSet<NodeId>,
    nodes: &[SensorNode],
    protocol: Protocol,
    round: usize,
) -> Result<Clustering> {
    let hp = head_positions(heads, nodes)?;
    let member_of = nodes
        .iter()
        .filter(|n| n.alive && !heads.contains(&n.id))
        .map(|n| (n.id, nearest_head(n.pos, &hp)))
        .collect();
    Ok(Clustering {
        heads: heads.clone(),
        member_of,
        formed_at_round: round,
        protocol,
    })
}

/// Every alive non-head joins the head with the fewest hops (lowest id on
/// ties). Nodes no head can reach fall back to the Euclidean-nearest head.
pub fn assign_by_hops(
    heads: &BTreeSet<NodeId>,
    graph: &ConnectivityGraph,
    nodes: &[SensorNode],
    protocol: Protocol,
    round: usize,
) -> Result<Clustering> {
    let hp = head_positions(heads, nodes)?;
    let fields = hp
        .iter()
        .filter(|&&(h, _)| graph.contains(h))
        .map(|&(h, pos)| hop_distances(graph, h).map(|f| (h, pos, f)))
        .collect::<Result<Vec<_>>>()?;
    let mut member_of = BTreeMap::new();
    for n in nodes.iter().filter(|n| n.alive && !heads.contains(&n.id)) {
        // fewest hops, then the Euclidean-nearer head, then the lowest id;
        // heads ascend, so strict comparisons keep the lowest id
        let mut best: Option<(u32, f64, NodeId)> = None;
        for (h, pos, f) in &fields {
            if let Some(d) = f.get(n.id) {
                let e = n.pos.distance_sq(*pos);
                if best.is_none_or(|(bd, be, _)| d < bd || (d == bd && e < be)) {
                    best = Some((d, e, *h));
                }
            }
        }
        let head = match best {
            Some((_, _, h)) => h,
            None => nearest_head(n.pos, &hp),
        };
        member_of.insert(n.id, head);
    }
    Ok(Clustering {
        heads: heads.clone(),
        member_of,
        formed_at_round: round,
        protocol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_nodes(n: usize) -> Vec<SensorNode> {
        (0..n)
            .map(|i| SensorNode::new(i, Point::new(i as f64, 0.0), 1.0))
            .collect()
    }

    #[test]
    fn one_head_takes_everyone() {
        let nodes = line_nodes(10);
        let heads = BTreeSet::from([4]);
        let c = assign_by_distance(&heads, &nodes, Protocol::Leach, 0).unwrap();
        assert_eq!(c.member_of.len(), 9);
        c.validate(&nodes).unwrap();
        let g = ConnectivityGraph::path(10);
        let c = assign_by_hops(&heads, &g, &nodes, Protocol::Rcft, 0).unwrap();
        assert_eq!(c.member_of.len(), 9);
    }

    #[test]
    fn distance_tie_goes_to_lower_head() {
        let nodes = vec![
            SensorNode::new(0, Point::new(0.0, 0.0), 1.0),
            SensorNode::new(3, Point::new(-5.0, 0.0), 1.0),
            SensorNode::new(8, Point::new(5.0, 0.0), 1.0),
        ];
        let c = assign_by_distance(&BTreeSet::from([8, 3]), &nodes, Protocol::Leach, 0).unwrap();
        assert_eq!(c.member_of[&0], 3);
    }

    #[test]
    fn hops_on_line_with_tie() {
        // a-b-c-d-e, heads {a, e}
        let nodes = line_nodes(5);
        let g = ConnectivityGraph::path(5);
        let c = assign_by_hops(&BTreeSet::from([0, 4]), &g, &nodes, Protocol::Rcft, 0).unwrap();
        assert_eq!(c.member_of[&1], 0);
        assert_eq!(c.member_of[&2], 0);
        assert_eq!(c.member_of[&3], 4);
    }

    #[test]
    fn unreachable_nodes_fall_back_to_distance() {
        let nodes = line_nodes(6);
        // 0-1-2 connected; 3,4,5 isolated
        let g = ConnectivityGraph::from_edges(6, &[(0, 1), (1, 2)]).unwrap();
        let c = assign_by_hops(&BTreeSet::from([0]), &g, &nodes, Protocol::Rcft, 0).unwrap();
        assert_eq!(c.member_of.len(), 5);
        assert!(c.member_of.values().all(|&h| h == 0));
    }

    #[test]
    fn empty_or_dead_heads_rejected() {
        let mut nodes = line_nodes(3);
        assert!(assign_by_distance(&BTreeSet::new(), &nodes, Protocol::Leach, 0).is_err());
        nodes[1].alive = false;
        assert!(assign_by_distance(&BTreeSet::from([1]), &nodes, Protocol::Leach, 0).is_err());
    }
}
