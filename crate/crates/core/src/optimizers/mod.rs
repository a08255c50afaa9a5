//! GA, PSO, hybrid GA-PSO and random-placement engines over fixed-size
//! deployments.

mod config;
mod engines;
mod operators;
mod pso;
mod state;

pub use config::{HybridSchedule, OptimizerConfig};
pub use engines::{
    optimize, random_search, run_engine, run_ga, run_hybrid, run_pso, run_random_baseline, Engine, RunOutcome,
};
pub use operators::{ga_crossover, ga_mutate, ga_select, tournament};
pub use pso::pso_step;
pub use state::{Particle, RunState};
