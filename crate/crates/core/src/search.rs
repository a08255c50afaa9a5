//! Minimal node-count search and independent verification of deployments.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{
    connectivity, coverage, CoverageSampler, FitnessWeights, RoutingTree, Sampling, SEARCH_SAMPLES,
};
use crate::geometry::{Deployment, Scenario};
use crate::optimizers::{optimize, Engine, OptimizerConfig};

/// Seed spacing between retries at the same node count.
pub const RETRY_SEED_STRIDE: u64 = 1000;
const SAMPLER_SALT: u64 = 0x5A3C_91E7_0B2D_4F68;
const VERIFY_SALT: u64 = 0xC0FF_EE00_D15E_A5E5;

/// Knobs of the outer node-count search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchOptions {
    pub retries_per_n: usize,
    /// Slack between the coverage target and the verified coverage.
    pub mc_tolerance: f64,
    /// Samples in the fresh verification sampler.
    pub k_verify: usize,
    /// Samples in the frozen per-run search sampler.
    pub k_search: usize,
    /// Layout of the search sampler. Verification always uses uniform points.
    pub search_sampling: Sampling,
    pub weights: FitnessWeights<f64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            retries_per_n: 3,
            mc_tolerance: 0.02,
            k_verify: 10_000,
            k_search: SEARCH_SAMPLES,
            search_sampling: Sampling::Stratified,
            weights: FitnessWeights::default(),
        }
    }
}

/// Independent re-measurement of a deployment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub coverage: f64,
    pub connectivity_ratio: f64,
    pub is_connected: bool,
    /// Largest per-node energy over incident spanning-tree links is within `e_max`.
    pub per_node_energy_ok: bool,
    pub max_node_energy: f64,
}

/// Result of the minimal node-count search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub engine: Engine,
    pub n: usize,
    pub feasible: bool,
    pub verified_coverage: f64,
    pub is_connected: bool,
    pub per_node_energy_ok: bool,
    /// Coverage under the run's own frozen sampler.
    pub search_coverage: f64,
    pub fitness: f64,
    pub energy_total: f64,
    pub generations_used: usize,
    pub lower_bound: usize,
    /// Engine runs over all node counts tried.
    pub attempts: usize,
    /// Seed of the run that produced `deployment`.
    pub run_seed: u64,
    pub verification_seed: u64,
    pub k_verify: usize,
    pub wall_time_s: f64,
    pub deployment: Deployment<f64>,
}

fn disks_needed(fraction: f64, scenario: &Scenario<f64>) -> usize {
    let disk = std::f64::consts::PI * scenario.rs * scenario.rs;
    let n = (fraction * scenario.region.area() / disk).ceil();
    (n as usize).max(1)
}

/// Area bound: fewer than `ceil(target * M * N / (pi rs^2))` disks cannot
/// reach the coverage target. Never below 1.
pub fn analytic_lower_bound(scenario: &Scenario<f64>) -> usize {
    disks_needed(scenario.coverage_target, scenario)
}

/// Search ceiling, four times the area needed to tile the region with disks.
pub fn node_ceiling(scenario: &Scenario<f64>) -> usize {
    disks_needed(4.0, scenario).max(analytic_lower_bound(scenario))
}

/// Seed of the verification sampler for a search started with `seed`.
pub fn verification_seed(seed: u64) -> u64 {
    seed ^ VERIFY_SALT
}

/// Seed of the frozen search sampler for a run seeded with `run_seed`.
pub fn search_sampler_seed(run_seed: u64) -> u64 {
    run_seed ^ SAMPLER_SALT
}

/// Re-measures coverage with a fresh sampler of `k_verify` points, recomputes
/// connectivity, and checks the per-node energy cap.
pub fn verify_deployment(
    deployment: &Deployment<f64>,
    scenario: &Scenario<f64>,
    verification_seed: u64,
    k_verify: usize,
) -> Verification {
    let sampler = CoverageSampler::new(&scenario.region, k_verify, verification_seed);
    let cov = coverage(deployment, scenario, &sampler);
    let conn = connectivity(deployment, scenario);
    let tree = RoutingTree::build(deployment, scenario);
    let max_node_energy = tree.per_node_energy(deployment, scenario).into_iter().fold(0.0, f64::max);
    Verification {
        coverage: cov,
        connectivity_ratio: conn.ratio,
        is_connected: conn.is_connected,
        per_node_energy_ok: max_node_energy <= scenario.e_max,
        max_node_energy,
    }
}

struct Attempt {
    run_seed: u64,
    deployment: Deployment<f64>,
    search_coverage: f64,
    fitness: f64,
    energy_total: f64,
    generations_used: usize,
    verification: Verification,
}

fn attempt(
    n: usize,
    scenario: &Scenario<f64>,
    engine: Engine,
    config: &OptimizerConfig,
    options: &SearchOptions,
    run_seed: u64,
    verify_seed: u64,
) -> Result<Attempt> {
    let sampler = CoverageSampler::with_scheme(
        &scenario.region,
        options.k_search,
        search_sampler_seed(run_seed),
        options.search_sampling,
    );
    let run_config = config.clone().with_seed(run_seed);
    let (outcome, eval) = optimize(engine, n, scenario, &sampler, &options.weights, &run_config)?;
    let verification = verify_deployment(&outcome.best, scenario, verify_seed, options.k_verify);
    Ok(Attempt {
        run_seed,
        search_coverage: eval.coverage,
        fitness: eval.fitness,
        energy_total: eval.energy_total,
        generations_used: outcome.generations_used(),
        deployment: outcome.best,
        verification,
    })
}

/// Finds the smallest node count for which `engine` produces a deployment
/// whose fresh-sample coverage is at least `coverage_target - mc_tolerance`
/// and whose communication graph is connected.
///
/// Starts at [`analytic_lower_bound`] and steps by one. At each count the
/// engine is run up to `retries_per_n` times with seeds
/// `config.seed + 1000 * attempt`; the lowest-numbered feasible attempt wins.
pub fn find_min_nodes(
    scenario: &Scenario<f64>,
    engine: Engine,
    config: &OptimizerConfig,
    options: &SearchOptions,
) -> Result<FeasibilityReport> {
    config.validate()?;
    options.weights.validate()?;
    if options.retries_per_n == 0 {
        return Err(Error::InvalidConfig("retries_per_n must be at least 1".into()));
    }
    let started = Instant::now();
    let lower = analytic_lower_bound(scenario);
    let ceiling = node_ceiling(scenario);
    let verify_seed = verification_seed(config.seed);
    let threshold = scenario.coverage_target - options.mc_tolerance;
    let mut attempts = 0;
    for n in lower..=ceiling {
        let runs: Vec<Attempt> = (0..options.retries_per_n as u64)
            .into_par_iter()
            .map(|a| {
                let seed = config.seed.wrapping_add(RETRY_SEED_STRIDE.wrapping_mul(a));
                attempt(n, scenario, engine, config, options, seed, verify_seed)
            })
            .collect::<Result<_>>()?;
        let winner = runs.iter().position(|r| r.verification.coverage >= threshold && r.verification.is_connected);
        if let Some(i) = winner {
            attempts += i + 1;
            let r = runs.into_iter().nth(i).expect("index from position");
            return Ok(FeasibilityReport {
                engine,
                n,
                feasible: true,
                verified_coverage: r.verification.coverage,
                is_connected: r.verification.is_connected,
                per_node_energy_ok: r.verification.per_node_energy_ok,
                search_coverage: r.search_coverage,
                fitness: r.fitness,
                energy_total: r.energy_total,
                generations_used: r.generations_used,
                lower_bound: lower,
                attempts,
                run_seed: r.run_seed,
                verification_seed: verify_seed,
                k_verify: options.k_verify,
                wall_time_s: started.elapsed().as_secs_f64(),
                deployment: r.deployment,
            });
        }
        attempts += runs.len();
    }
    Err(Error::SearchExhausted { ceiling })
}
