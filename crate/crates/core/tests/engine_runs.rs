use std::collections::BTreeSet;

use rcft_core::batch::{jobs_for, run_batch, run_batch_sequential, seed_list};
use rcft_core::engine::Simulation;
use rcft_core::{run_experiment, NetworkConfig, NodeId, Protocol, ProtocolParams};

fn config(seed: u64, rounds: usize) -> NetworkConfig {
    NetworkConfig {
        seed,
        rounds,
        ..NetworkConfig::default()
    }
}

#[test]
fn same_seed_same_log() {
    let params = ProtocolParams::default();
    for p in Protocol::ALL {
        let a = run_experiment(&config(7, 30), p, &params).unwrap();
        let b = run_experiment(&config(7, 30), p, &params).unwrap();
        assert_eq!(a, b, "{p}");
    }
}

#[test]
fn short_run_is_prefix_of_long_run() {
    let params = ProtocolParams::default();
    for p in Protocol::ALL {
        for seed in [1, 4] {
            let short = run_experiment(&config(seed, 20), p, &params).unwrap();
            let long = run_experiment(&config(seed, 150), p, &params).unwrap();
            assert_eq!(short.reports[..], long.reports[..20], "{p} seed {seed}");
        }
    }
}

#[test]
fn spent_energy_matches_drained_batteries() {
    let params = ProtocolParams::default();
    for p in Protocol::ALL {
        let cfg = NetworkConfig {
            initial_energy: 0.05,
            ..config(3, 0)
        };
        let mut sim = Simulation::new(&cfg, p, &params).unwrap();
        let start = sim.total_energy();
        let mut spent = 0.0;
        let mut prev_cum = 0.0;
        while let Some(r) = sim.step().unwrap() {
            spent += r.energy_spent_this_round;
            let cum = r.cumulative_mean_energy_per_initial_node;
            assert!(cum >= prev_cum, "{p}: cumulative energy went down");
            assert!(cum <= cfg.initial_energy * (1.0 + 1e-12));
            prev_cum = cum;
        }
        assert!(
            (start - sim.total_energy() - spent).abs() < 1e-9 * start,
            "{p}"
        );
        assert_eq!(sim.alive_count(), 0);
    }
}

#[test]
fn dead_nodes_never_take_part() {
    let params = ProtocolParams::default();
    for p in Protocol::ALL {
        let cfg = NetworkConfig {
            initial_energy: 0.1,
            ..config(5, 0)
        };
        let mut sim = Simulation::new(&cfg, p, &params).unwrap();
        loop {
            let dead: BTreeSet<NodeId> = sim
                .nodes()
                .iter()
                .filter(|n| !n.alive)
                .map(|n| n.id)
                .collect();
            let energy: Vec<f64> = sim.nodes().iter().map(|n| n.energy).collect();
            if sim.step().unwrap().is_none() {
                break;
            }
            let c = sim.clustering().unwrap();
            for id in &dead {
                assert!(
                    !c.heads.contains(id) && !c.member_of.contains_key(id),
                    "{p}: dead node {id} acted"
                );
                assert_eq!(sim.nodes()[*id].energy, energy[*id]);
            }
        }
    }
}

#[test]
fn rcft_clusters_keep_their_node_sets() {
    let params = ProtocolParams::default();
    for seed in seed_list(5) {
        let mut sim = Simulation::new(&config(seed, 0), Protocol::Rcft, &params).unwrap();
        sim.step().unwrap().unwrap();
        let first: BTreeSet<_> = sim.clustering().unwrap().node_sets().into_iter().collect();
        for _ in 1..150 {
            sim.step().unwrap().unwrap();
            let now: BTreeSet<_> = sim.clustering().unwrap().node_sets().into_iter().collect();
            if sim.nodes().iter().all(|n| n.alive) {
                assert_eq!(now, first, "seed {seed}");
            } else {
                // after deaths every cluster is what is left of an original one
                for set in &now {
                    assert!(first.iter().any(|f| set.is_subset(f)));
                }
            }
        }
        assert_eq!(sim.formations(), 1);
    }
}

#[test]
fn leach_rotates_every_node_once_per_epoch() {
    let params = ProtocolParams::default();
    let epoch = params.epoch_len();
    for seed in seed_list(5) {
        let mut sim = Simulation::new(&config(seed, 0), Protocol::Leach, &params).unwrap();
        for _ in 0..2 {
            let mut served = vec![0usize; sim.nodes().len()];
            for _ in 0..epoch {
                sim.step().unwrap().unwrap();
                for &h in &sim.clustering().unwrap().heads {
                    served[h] += 1;
                }
            }
            assert!(sim.nodes().iter().all(|n| n.alive));
            assert!(served.iter().all(|&s| s == 1), "seed {seed}: {served:?}");
        }
    }
}

#[test]
fn batch_order_and_content_do_not_depend_on_threads() {
    let jobs = jobs_for(
        &config(0, 25),
        &ProtocolParams::default(),
        &Protocol::ALL,
        &seed_list(4),
    );
    let a = run_batch(&jobs).unwrap();
    let b = run_batch_sequential(&jobs).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 12);
    assert_eq!((a[0].protocol, a[0].seed()), (Protocol::Leach, 1));
}
