//! Independent (config, protocol) runs fanned out over worker threads.
//!
//! With the `parallel` feature (default) [`run_batch`] uses rayon; without it,
//! it falls back to [`run_batch_sequential`]. Each run owns its whole state and
//! results come back in job order either way, so the output is identical.

use crate::engine::{run_experiment, ExperimentLog};
use crate::error::Result;
use crate::model::NetworkConfig;
use crate::protocols::{Protocol, ProtocolParams};

/// Base of the seed list used for "N runs" experiments: seeds are
/// `SEED_BASE, SEED_BASE + 1, ...`.
pub const SEED_BASE: u64 = 1;

pub fn seed_list(count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| SEED_BASE + i).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub config: NetworkConfig,
    pub protocol: Protocol,
    pub params: ProtocolParams,
}

/// Every (protocol, seed) pair over a base config, protocol-major.
pub fn jobs_for(
    base: &NetworkConfig,
    params: &ProtocolParams,
    protocols: &[Protocol],
    seeds: &[u64],
) -> Vec<Job> {
    protocols
        .iter()
        .flat_map(|&protocol| {
            seeds.iter().map(move |&seed| Job {
                config: NetworkConfig {
                    seed,
                    ..base.clone()
                },
                protocol,
                params: params.clone(),
            })
        })
        .collect()
}

pub fn run_batch_sequential(jobs: &[Job]) -> Result<Vec<ExperimentLog>> {
    jobs.iter()
        .map(|j| run_experiment(&j.config, j.protocol, &j.params))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn run_batch_parallel(jobs: &[Job]) -> Result<Vec<ExperimentLog>> {
    use rayon::prelude::*;
    jobs.par_iter()
        .map(|j| run_experiment(&j.config, j.protocol, &j.params))
        .collect()
}

pub fn run_batch(jobs: &[Job]) -> Result<Vec<ExperimentLog>> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(jobs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(jobs)
    }
}
