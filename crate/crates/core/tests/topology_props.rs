mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rcft_core::topology::{build_graph, farthest_member, hop_distances, step_toward};
use rcft_core::{ConnectivityGraph, NodeId, RngStream, SensorNode};

use common::{floyd_warshall, random_edges, random_nodes, unit_disk_edges};

fn edge_set(g: &ConnectivityGraph) -> BTreeSet<(NodeId, NodeId)> {
    g.nodes()
        .iter()
        .flat_map(|&a| g.neighbors(a).iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Every shortest path a -> b, by exhaustive DFS over the all-pairs table.
fn all_shortest_paths(
    apsp: &[Vec<Option<u32>>],
    edges: &BTreeSet<(usize, usize)>,
    a: usize,
    b: usize,
) -> Vec<Vec<usize>> {
    let n = apsp.len();
    let adj = |u: usize, v: usize| edges.contains(&(u.min(v), u.max(v)));
    let mut out = Vec::new();
    let mut stack = vec![vec![a]];
    while let Some(path) = stack.pop() {
        let u = *path.last().unwrap();
        if u == b {
            out.push(path);
            continue;
        }
        let du = apsp[u][b].unwrap();
        for v in 0..n {
            if adj(u, v) && apsp[v][b] == Some(du - 1) {
                let mut p = path.clone();
                p.push(v);
                stack.push(p);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bfs_matches_floyd_warshall(seed in any::<u64>(), n in 1usize..=30, p in 0.02f64..0.4) {
        let mut rng = RngStream::new(seed, "graph");
        let edges = random_edges(&mut rng, n, p);
        let g = ConnectivityGraph::from_edges(n, &edges).unwrap();
        let apsp = floyd_warshall(n, &edges);
        for s in 0..n {
            let h = hop_distances(&g, s).unwrap();
            for t in 0..n {
                prop_assert_eq!(h.get(t), apsp[s][t]);
            }
        }
    }

    #[test]
    fn unit_disk_matches_pair_scan(seed in any::<u64>(), n in 0usize..=60, range in 5.0f64..40.0) {
        let mut rng = RngStream::new(seed, "nodes");
        let mut nodes = random_nodes(&mut rng, n, 100.0);
        for node in nodes.iter_mut() {
            if rng.uniform() < 0.1 {
                node.alive = false;
            }
        }
        let g = build_graph(&nodes, range);
        prop_assert_eq!(edge_set(&g), unit_disk_edges(&nodes, range));
        for &a in g.nodes() {
            let adj = g.neighbors(a);
            prop_assert!(adj.windows(2).all(|w| w[0] < w[1]));
            for &b in adj {
                prop_assert!(g.neighbors(b).contains(&a));
            }
        }
    }

    #[test]
    fn build_is_permutation_invariant(seed in any::<u64>(), n in 1usize..=40) {
        let mut rng = RngStream::new(seed, "nodes");
        let nodes = random_nodes(&mut rng, n, 100.0);
        let ids: Vec<usize> = (0..n).collect();
        let perm = rng.choose_distinct(&ids, n);
        let relabelled: Vec<SensorNode> = nodes
            .iter()
            .map(|x| SensorNode { id: perm[x.id], ..x.clone() })
            .collect();
        let g = build_graph(&nodes, 25.0);
        let h = build_graph(&relabelled, 25.0);
        let mapped: BTreeSet<_> = edge_set(&g)
            .into_iter()
            .map(|(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
            .collect();
        prop_assert_eq!(mapped, edge_set(&h));
    }

    #[test]
    fn one_step_gets_one_hop_closer(seed in any::<u64>(), n in 2usize..=30, p in 0.05f64..0.4) {
        let mut rng = RngStream::new(seed, "graph");
        let edges = random_edges(&mut rng, n, p);
        let g = ConnectivityGraph::from_edges(n, &edges).unwrap();
        let apsp = floyd_warshall(n, &edges);
        for a in 0..n {
            for b in 0..n {
                let Some(d) = apsp[a][b] else { continue };
                if d == 0 { continue; }
                let s = step_toward(&g, a, b, 1).unwrap();
                prop_assert_eq!(apsp[s][b], Some(d - 1));
                prop_assert_eq!(step_toward(&g, a, b, d as usize + 3).unwrap(), b);
            }
        }
    }

    #[test]
    fn path_is_lexicographically_smallest_geodesic(seed in any::<u64>(), n in 2usize..=10, p in 0.2f64..0.6) {
        let mut rng = RngStream::new(seed, "graph");
        let edges = random_edges(&mut rng, n, p);
        let g = ConnectivityGraph::from_edges(n, &edges).unwrap();
        let apsp = floyd_warshall(n, &edges);
        let set: BTreeSet<_> = edges.iter().copied().collect();
        for a in 0..n {
            for b in 0..n {
                let Some(d) = apsp[a][b] else { continue };
                let best = all_shortest_paths(&apsp, &set, a, b).into_iter().min().unwrap();
                for steps in 0..=d as usize {
                    prop_assert_eq!(step_toward(&g, a, b, steps).unwrap(), best[steps]);
                }
            }
        }
    }

    #[test]
    fn farthest_member_matches_scan(seed in any::<u64>(), n in 2usize..=30, p in 0.05f64..0.4) {
        let mut rng = RngStream::new(seed, "graph");
        let edges = random_edges(&mut rng, n, p);
        let g = ConnectivityGraph::from_edges(n, &edges).unwrap();
        let apsp = floyd_warshall(n, &edges);
        let ids: Vec<usize> = (0..n).collect();
        let k = 1 + rng.below(n);
        let members = rng.choose_distinct(&ids, k);
        let src = rng.below(n);
        let h = hop_distances(&g, src).unwrap();
        let mut best: Option<(u32, usize)> = None;
        for &m in &members {
            if let Some(d) = apsp[src][m] {
                if best.is_none_or(|b| (d, m) > b) {
                    best = Some((d, m));
                }
            }
        }
        match best {
            Some((d, m)) => prop_assert_eq!(farthest_member(&h, members).unwrap(), (m, d)),
            None => prop_assert!(farthest_member(&h, members).is_err()),
        }
    }
}

#[test]
fn diamond_tie_break_by_enumeration() {
    // a=0, b=1, c=2, d=3 with edges a-b, b-d, a-c, c-d
    let edges = [(0, 1), (1, 3), (0, 2), (2, 3)];
    let apsp = floyd_warshall(4, &edges);
    let set: BTreeSet<_> = edges
        .iter()
        .map(|&(a, b): &(usize, usize)| (a.min(b), a.max(b)))
        .collect();
    let paths = all_shortest_paths(&apsp, &set, 0, 3);
    assert_eq!(paths.len(), 2);
    let g = ConnectivityGraph::from_edges(4, &edges).unwrap();
    assert_eq!(
        step_toward(&g, 0, 3, 1).unwrap(),
        paths.iter().min().unwrap()[1]
    );
    assert_eq!(step_toward(&g, 0, 3, 1).unwrap(), 1);
}

#[test]
fn default_density_is_connected_and_multi_hop() {
    use rcft_core::{generate_field, NetworkConfig};
    let cfg = NetworkConfig::default();
    let mut connected = 0;
    for seed in 1..=10 {
        let nodes = generate_field(&cfg, &mut RngStream::new(seed, "placement")).unwrap();
        let g = build_graph(&nodes, cfg.radio_range);
        let h = hop_distances(&g, 0).unwrap();
        if h.reachable().count() == nodes.len() {
            connected += 1;
        }
        assert!(h.reachable().map(|(_, d)| d).max().unwrap() >= 3);
    }
    assert!(connected >= 8, "{connected}/10 connected");
}
