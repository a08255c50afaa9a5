use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the hybrid engine combines GA and PSO phases.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HybridSchedule {
    /// GA pass followed by one PSO step in every generation.
    #[default]
    Interleaved,
    /// GA-only for the first `ga_fraction` of the generations, PSO-only after.
    Sequential { ga_fraction: f64 },
}

/// Search parameters shared by every engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Mutation displacement bound as a fraction of each region side.
    pub mutation_range_fraction: f64,
    pub cognitive_weight: f64,
    pub social_weight: f64,
    pub inertia_start: f64,
    pub inertia_end: f64,
    /// Per-component velocity cap as a fraction of the shorter region side.
    pub velocity_cap_fraction: f64,
    pub convergence_epsilon: f64,
    /// Consecutive sub-epsilon generations before stopping; 0 disables.
    pub convergence_patience: usize,
    pub hybrid_schedule: HybridSchedule,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self::parameter_set_1()
    }
}

impl OptimizerConfig {
    /// Population 50, 50 generations, crossover 0.8, mutation 0.1, c1 = c2 = 1.5.
    pub fn parameter_set_1() -> Self {
        Self {
            population_size: 50,
            max_generations: 50,
            crossover_rate: 0.8,
            mutation_rate: 0.1,
            mutation_range_fraction: 0.1,
            cognitive_weight: 1.5,
            social_weight: 1.5,
            inertia_start: 0.9,
            inertia_end: 0.4,
            velocity_cap_fraction: 0.2,
            convergence_epsilon: 1e-4,
            convergence_patience: 15,
            hybrid_schedule: HybridSchedule::Interleaved,
            seed: 0,
        }
    }

    /// Population 100, 100 generations, c1 = c2 = 2.0; otherwise as set 1.
    pub fn parameter_set_2() -> Self {
        Self {
            population_size: 100,
            max_generations: 100,
            cognitive_weight: 2.0,
            social_weight: 2.0,
            ..Self::parameter_set_1()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if self.max_generations < 1 {
            return bad("max_generations must be at least 1");
        }
        for (name, r) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {r}")));
            }
        }
        if !(self.inertia_start >= self.inertia_end && self.inertia_end >= 0.0) {
            return bad("inertia must satisfy inertia_start >= inertia_end >= 0");
        }
        let finite_nonneg = [
            self.mutation_range_fraction,
            self.cognitive_weight,
            self.social_weight,
            self.velocity_cap_fraction,
            self.convergence_epsilon,
        ];
        if finite_nonneg.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("weights, fractions and epsilon must be finite and non-negative");
        }
        if let HybridSchedule::Sequential { ga_fraction } = self.hybrid_schedule {
            if !(0.0..=1.0).contains(&ga_fraction) {
                return bad("ga_fraction must lie in [0, 1]");
            }
        }
        Ok(())
    }

    /// Inertia weight at `generation`, linear from start to end over the run.
    pub fn inertia(&self, generation: usize) -> f64 {
        let span = self.max_generations.saturating_sub(1).max(1) as f64;
        let t = (generation as f64 / span).min(1.0);
        self.inertia_start + (self.inertia_end - self.inertia_start) * t
    }
}
