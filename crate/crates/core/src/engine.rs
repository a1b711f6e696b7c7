//! The round loop.
//!
//! Each round runs a set-up phase (formation plus its control-traffic charge),
//! a steady-state phase (one data packet per member, aggregation and one
//! transmission to the base station per head), then death bookkeeping. Nodes
//! whose energy reaches zero die at round end and the hop graph is rebuilt.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::metrics::{cluster_stats, ClusterStat};
use crate::model::{generate_field, NetworkConfig, NodeId, SensorNode};
use crate::protocols::{
    assign_by_distance, assign_by_hops, leach_c_elect, leach_elect, rcft_form, Clustering,
    LeachHistory, Protocol, ProtocolParams,
};
use crate::rng::RngStream;
use crate::topology::{build_graph, ConnectivityGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundReport {
    pub round: usize,
    pub protocol: Protocol,
    pub seed: u64,
    /// Alive nodes at the start of the round.
    pub alive_count: usize,
    pub clusters: Vec<ClusterStat>,
    /// Network total, set-up and steady state together (J).
    pub energy_spent_this_round: f64,
    /// Set-up share of `energy_spent_this_round` (J).
    pub formation_energy: f64,
    /// Cumulative energy spent divided by the initial node count (J).
    pub cumulative_mean_energy_per_initial_node: f64,
    pub formation_happened: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentLog {
    pub config: NetworkConfig,
    pub protocol: Protocol,
    pub params: ProtocolParams,
    pub reports: Vec<RoundReport>,
    /// Round in which each node died, by node id.
    pub death_rounds: Vec<Option<usize>>,
    /// Number of cluster formations performed.
    pub formations: usize,
}

impl ExperimentLog {
    pub fn seed(&self) -> u64 {
        self.config.seed
    }
}

#[derive(Debug, Clone)]
pub struct SetupOutcome {
    pub clustering: Clustering,
    pub formation_energy: f64,
    pub formed: bool,
}

fn charge(node: &mut SensorNode, amount: f64) -> f64 {
    node.spend(amount)
}

/// Control traffic for one formation: each head broadcasts one control packet
/// at its farthest-member distance; each member receives that broadcast and
/// sends one join packet that the head receives.
pub fn formation_charge(
    nodes: &mut [SensorNode],
    clustering: &Clustering,
    config: &NetworkConfig,
) -> Result<f64> {
    let bits = config.control_packet_bits;
    let radio = &config.radio;
    let mut spent = 0.0;
    for (head, members) in clustering.clusters() {
        let hpos = nodes[head].pos;
        let reach = members
            .iter()
            .map(|&m| nodes[m].pos.distance(hpos))
            .fold(0.0, f64::max);
        let mut head_cost = radio.tx_energy(bits, reach)?;
        for &m in &members {
            let d = nodes[m].pos.distance(hpos);
            let member_cost = radio.tx_energy(bits, d)? + radio.rx_energy(bits);
            spent += charge(&mut nodes[m], member_cost);
            head_cost += radio.rx_energy(bits);
        }
        spent += charge(&mut nodes[head], head_cost);
    }
    Ok(spent)
}

/// One control transmit (one radio hop) and one receive for every alive node;
/// charged once per RCFT re-centering pass.
pub fn recenter_pass_charge(nodes: &mut [SensorNode], config: &NetworkConfig) -> Result<f64> {
    let bits = config.control_packet_bits;
    let per_node = config.radio.tx_energy(bits, config.radio_range)? + config.radio.rx_energy(bits);
    Ok(nodes
        .iter_mut()
        .filter(|n| n.alive)
        .map(|n| charge(n, per_node))
        .sum())
}

/// Steady-state data round. Returns the energy drawn.
///
/// Members send one data packet to their head; heads receive every member
/// packet, aggregate `members + 1` signals and send one packet to the base
/// station.
pub fn steady_round(
    nodes: &mut [SensorNode],
    clustering: &Clustering,
    config: &NetworkConfig,
) -> Result<f64> {
    let bits = config.data_packet_bits;
    let radio = &config.radio;
    let mut spent = 0.0;
    for (head, members) in clustering.clusters() {
        if !nodes[head].alive {
            continue;
        }
        let hpos = nodes[head].pos;
        let mut received = 0u64;
        for &m in &members {
            if !nodes[m].alive {
                continue;
            }
            let cost = radio.tx_energy(bits, nodes[m].pos.distance(hpos))?;
            spent += charge(&mut nodes[m], cost);
            received += 1;
        }
        let head_cost = radio.rx_energy(bits) * received as f64
            + radio.aggregate_energy(bits, received + 1)
            + radio.tx_energy(bits, hpos.distance(config.bs_pos))?;
        spent += charge(&mut nodes[head], head_cost);
    }
    Ok(spent)
}

/// Drops dead members from a frozen clustering and hands a dead head's role
/// to its highest-energy alive member (lowest id on ties). Clusters with no
/// alive node disappear.
pub fn repair_frozen(clustering: &Clustering, nodes: &[SensorNode]) -> Option<Clustering> {
    let mut out = Clustering {
        heads: BTreeSet::new(),
        member_of: Default::default(),
        formed_at_round: clustering.formed_at_round,
        protocol: clustering.protocol,
    };
    for (head, members) in clustering.clusters() {
        let alive: Vec<NodeId> = members.into_iter().filter(|&m| nodes[m].alive).collect();
        let new_head = if nodes[head].alive {
            head
        } else {
            match alive
                .iter()
                .copied()
                .max_by(|&a, &b| nodes[a].energy.total_cmp(&nodes[b].energy).then(b.cmp(&a)))
            {
                Some(h) => h,
                None => continue,
            }
        };
        out.heads.insert(new_head);
        for m in alive.into_iter().filter(|&m| m != new_head) {
            out.member_of.insert(m, new_head);
        }
    }
    (!out.heads.is_empty()).then_some(out)
}

/// Owns the state of one (config, protocol) run.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: NetworkConfig,
    protocol: Protocol,
    params: ProtocolParams,
    nodes: Vec<SensorNode>,
    graph: ConnectivityGraph,
    history: LeachHistory,
    frozen: Option<Clustering>,
    last: Option<Clustering>,
    election_rng: RngStream,
    death_rounds: Vec<Option<usize>>,
    formations: usize,
    cumulative_spent: f64,
    round: usize,
}

impl Simulation {
    pub fn new(
        config: &NetworkConfig,
        protocol: Protocol,
        params: &ProtocolParams,
    ) -> Result<Self> {
        config.validate()?;
        params.validate()?;
        let nodes = generate_field(config, &mut RngStream::new(config.seed, "placement"))?;
        let graph = build_graph(&nodes, config.radio_range);
        Ok(Self {
            config: config.clone(),
            protocol,
            params: params.clone(),
            history: LeachHistory::new(nodes.len()),
            death_rounds: vec![None; nodes.len()],
            nodes,
            graph,
            frozen: None,
            last: None,
            election_rng: RngStream::new(config.seed, protocol.as_str()),
            formations: 0,
            cumulative_spent: 0.0,
            round: 0,
        })
    }

    pub fn nodes(&self) -> &[SensorNode] {
        &self.nodes
    }

    pub fn graph(&self) -> &ConnectivityGraph {
        &self.graph
    }

    /// Clustering used by the most recent round.
    pub fn clustering(&self) -> Option<&Clustering> {
        self.last.as_ref()
    }

    pub fn formations(&self) -> usize {
        self.formations
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    pub fn total_energy(&self) -> f64 {
        self.nodes.iter().map(|n| n.energy).sum()
    }

    /// Forms (or reuses) the clustering for `round` and charges its control
    /// traffic.
    pub fn setup_phase(&mut self, round: usize) -> Result<SetupOutcome> {
        if self.alive_count() == 0 {
            return Err(Error::SimulationOver);
        }
        let cfg = &self.config;
        let outcome = match self.protocol {
            Protocol::Leach => {
                let heads = leach_elect(
                    &self.nodes,
                    round,
                    &self.params,
                    &mut self.history,
                    &mut self.election_rng,
                )?;
                let clustering = assign_by_distance(&heads, &self.nodes, self.protocol, round)?;
                let formation_energy = formation_charge(&mut self.nodes, &clustering, cfg)?;
                SetupOutcome {
                    clustering,
                    formation_energy,
                    formed: true,
                }
            }
            Protocol::LeachC => {
                let k = cfg.head_count.min(self.alive_count());
                let heads = leach_c_elect(
                    &self.nodes,
                    k,
                    self.params.leach_c_iterations,
                    &mut self.election_rng,
                )?;
                let clustering = assign_by_distance(&heads, &self.nodes, self.protocol, round)?;
                let formation_energy = formation_charge(&mut self.nodes, &clustering, cfg)?;
                SetupOutcome {
                    clustering,
                    formation_energy,
                    formed: true,
                }
            }
            Protocol::Rcft => match &self.frozen {
                Some(frozen) => {
                    let clustering =
                        repair_frozen(frozen, &self.nodes).ok_or(Error::SimulationOver)?;
                    self.frozen = Some(clustering.clone());
                    SetupOutcome {
                        clustering,
                        formation_energy: 0.0,
                        formed: false,
                    }
                }
                None => {
                    let out = rcft_form(
                        &self.nodes,
                        &self.graph,
                        &self.params,
                        &mut self.election_rng,
                        round,
                    )?;
                    let initial = assign_by_hops(
                        &out.initial_heads,
                        &self.graph,
                        &self.nodes,
                        self.protocol,
                        round,
                    )?;
                    let mut formation_energy = formation_charge(&mut self.nodes, &initial, cfg)?;
                    for _ in &out.passes {
                        formation_energy += recenter_pass_charge(&mut self.nodes, cfg)?;
                    }
                    formation_energy += formation_charge(&mut self.nodes, &out.clustering, cfg)?;
                    self.frozen = Some(out.clustering.clone());
                    SetupOutcome {
                        clustering: out.clustering,
                        formation_energy,
                        formed: true,
                    }
                }
            },
        };
        if outcome.formed {
            self.formations += 1;
        }
        Ok(outcome)
    }

    /// Runs one full round. Returns `None` once every node is dead.
    pub fn step(&mut self) -> Result<Option<RoundReport>> {
        let alive_count = self.alive_count();
        if alive_count == 0 {
            return Ok(None);
        }
        let round = self.round;
        let setup = self.setup_phase(round)?;
        debug_assert!(setup.clustering.validate(&self.nodes).is_ok());
        let clusters = cluster_stats(&setup.clustering, &self.nodes);
        let data = steady_round(&mut self.nodes, &setup.clustering, &self.config)?;
        let spent = setup.formation_energy + data;
        self.cumulative_spent += spent;

        let mut died = false;
        for n in self.nodes.iter_mut().filter(|n| n.alive && n.energy <= 0.0) {
            n.alive = false;
            n.energy = 0.0;
            self.death_rounds[n.id] = Some(round);
            died = true;
        }
        if died {
            self.graph = build_graph(&self.nodes, self.config.radio_range);
        }
        self.round += 1;
        self.last = Some(setup.clustering);
        Ok(Some(RoundReport {
            round,
            protocol: self.protocol,
            seed: self.config.seed,
            alive_count,
            clusters,
            energy_spent_this_round: spent,
            formation_energy: setup.formation_energy,
            cumulative_mean_energy_per_initial_node: self.cumulative_spent
                / self.config.node_count.max(1) as f64,
            formation_happened: setup.formed,
        }))
    }

    pub fn into_log(self, reports: Vec<RoundReport>) -> ExperimentLog {
        ExperimentLog {
            config: self.config,
            protocol: self.protocol,
            params: self.params,
            reports,
            death_rounds: self.death_rounds,
            formations: self.formations,
        }
    }
}

/// Runs `config.rounds` rounds (or until every node is dead) of one protocol
/// on the field drawn from `config.seed`.
pub fn run_experiment(
    config: &NetworkConfig,
    protocol: Protocol,
    params: &ProtocolParams,
) -> Result<ExperimentLog> {
    let mut sim = Simulation::new(config, protocol, params)?;
    let mut reports = Vec::with_capacity(config.rounds);
    while reports.len() < config.rounds {
        match sim.step()? {
            Some(r) => reports.push(r),
            None => break,
        }
    }
    Ok(sim.into_log(reports))
}
