//! Wireless sensor node placement.
//!
//! Places `n` sensor nodes in a rectangle to maximize Monte Carlo area
//! coverage and communication-graph connectivity while keeping a spanning-tree
//! transmit energy low. Engines: GA, PSO, the hybrid GA-PSO, and a random
//! baseline. On top sit a minimal node-count search and paired Wilcoxon
//! statistics for comparing engines.
//!
//! Geometry, evaluation and the engines are generic over [`Scalar`]
//! (`f32` or `f64`); the aliases below fix the common double-precision case.

pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod optimizers;
pub mod record;
pub mod scalar;
pub mod search;
pub mod stats;

pub use error::{Error, Result};
pub use evaluation::{
    connectivity, coverage, fitness, total_energy, transmit_energy, CoverageSampler, Evaluation, FitnessWeights,
    Objective, PlacementObjective,
};
pub use geometry::{clamp_to_region, distance, random_deployment, Deployment, EnergyModel, Point, Region, Scenario};
pub use optimizers::{Engine, OptimizerConfig, RunOutcome, RunState};
pub use record::RunRecord;
pub use scalar::Scalar;
pub use search::{analytic_lower_bound, find_min_nodes, verify_deployment, FeasibilityReport, SearchOptions};
pub use stats::{summarize_runs, wilcoxon_signed_rank, Alternative, PairedSample, WilcoxonResult};

pub type Point64 = Point<f64>;
pub type Region64 = Region<f64>;
pub type Scenario64 = Scenario<f64>;
pub type Deployment64 = Deployment<f64>;
pub type Evaluation64 = Evaluation<f64>;
pub type Sampler64 = CoverageSampler<f64>;
pub type Weights64 = FitnessWeights<f64>;

pub type Point32 = Point<f32>;
pub type Region32 = Region<f32>;
pub type Scenario32 = Scenario<f32>;
pub type Deployment32 = Deployment<f32>;
pub type Evaluation32 = Evaluation<f32>;
