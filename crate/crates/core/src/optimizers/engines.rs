use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{HybridSchedule, OptimizerConfig};
use super::operators::{crossover_tracked, ga_select, mutate_in_place};
use super::pso::pso_step;
use super::state::{best_index, evaluate_all, Particle, RunState};
use crate::error::{Error, Result};
use crate::evaluation::{CoverageSampler, Evaluation, FitnessWeights, Objective, PlacementObjective};
use crate::geometry::{Deployment, Region, Scenario};
use crate::scalar::Scalar;

/// Search engine selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Ga,
    Pso,
    Hybrid,
    Random,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Ga, Engine::Pso, Engine::Hybrid, Engine::Random];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Ga => "ga",
            Engine::Pso => "pso",
            Engine::Hybrid => "hybrid",
            Engine::Random => "random",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ga" => Ok(Engine::Ga),
            "pso" => Ok(Engine::Pso),
            "hybrid" | "ga-pso" | "gapso" => Ok(Engine::Hybrid),
            "random" => Ok(Engine::Random),
            other => Err(format!("unknown algorithm '{other}' (expected ga, pso, hybrid or random)")),
        }
    }
}

/// Best deployment found by a run together with the final state.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome<T> {
    pub best: Deployment<T>,
    pub best_fitness: T,
    pub state: RunState<T>,
}

impl<T: Scalar> RunOutcome<T> {
    fn from_state(state: RunState<T>) -> Self {
        Self { best: state.global_best.clone(), best_fitness: state.global_best_fitness, state }
    }

    pub fn generations_used(&self) -> usize {
        self.state.generation
    }

    pub fn evaluations(&self) -> usize {
        self.state.evaluations
    }
}

/// Independent generator streams for initialization, GA operators and PSO moves.
///
/// Every engine draws its initial population from the same stream, so GA,
/// PSO and hybrid runs with one seed start from the same population.
pub(crate) struct Streams {
    pub init: ChaCha8Rng,
    pub ga: ChaCha8Rng,
    pub pso: ChaCha8Rng,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        let stream = |id| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        Self { init: stream(0), ga: stream(1), pso: stream(2) }
    }
}

/// Stops when the best fitness improves by less than epsilon for `patience`
/// consecutive generations.
struct Convergence {
    epsilon: f64,
    patience: usize,
    stalled: usize,
    last: f64,
}

impl Convergence {
    fn new<T: Scalar>(config: &OptimizerConfig, start: T) -> Self {
        Self {
            epsilon: config.convergence_epsilon,
            patience: config.convergence_patience,
            stalled: 0,
            last: start.as_f64(),
        }
    }

    fn should_stop<T: Scalar>(&mut self, best: T) -> bool {
        let best = best.as_f64();
        if best - self.last < self.epsilon {
            self.stalled += 1;
        } else {
            self.stalled = 0;
        }
        self.last = best;
        self.patience > 0 && self.stalled >= self.patience
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Replacement {
    /// Generational GA: every non-elite slot receives an offspring.
    All,
    /// Hybrid: an offspring is produced for a slot only when crossover or
    /// mutation changed it (so both rates at zero make the pass a no-op), and
    /// it replaces the particle only if it is strictly fitter.
    Improving,
}

/// One GA pass: the best current individual is kept verbatim and every other
/// slot is filled from tournament-selected parents via crossover and mutation.
fn ga_generation<T, O, R>(
    state: &mut RunState<T>,
    region: &Region<T>,
    objective: &O,
    config: &OptimizerConfig,
    rng: &mut R,
    replacement: Replacement,
) where
    T: Scalar,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    let elite = state.elite_index();
    let fitness: Vec<T> = state.population.iter().map(|p| p.fitness).collect();
    let mut offspring = Vec::new();
    for slot in 0..state.population.len() {
        if slot == elite {
            continue;
        }
        let (a, b) = ga_select(&fitness, rng).expect("population size validated");
        let (mut child, crossed) =
            crossover_tracked(&state.population[a].position, &state.population[b].position, config.crossover_rate, rng)
                .expect("equal node counts");
        let moved = mutate_in_place(&mut child, config.mutation_rate, config.mutation_range_fraction, region, rng);
        if replacement == Replacement::All || crossed || moved > 0 {
            offspring.push((slot, child));
        }
    }
    let children: Vec<_> = offspring.iter().map(|(_, c)| c.clone()).collect();
    let scores = evaluate_all(objective, &children);
    state.evaluations += scores.len();
    for ((slot, child), f) in offspring.into_iter().zip(scores) {
        if replacement == Replacement::Improving && f <= state.population[slot].fitness {
            continue;
        }
        state.population[slot].replace_position(child, f);
    }
    state.refresh_bests();
}

fn check_inputs(n: usize, config: &OptimizerConfig) -> Result<()> {
    config.validate()?;
    if n == 0 {
        return Err(Error::InvalidConfig("node count must be at least 1".into()));
    }
    Ok(())
}

/// Generational GA with tournament selection, uniform crossover, uniform
/// mutation and a single elite.
pub fn run_ga<T, O>(n: usize, region: &Region<T>, objective: &O, config: &OptimizerConfig) -> Result<RunOutcome<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    check_inputs(n, config)?;
    let mut rngs = Streams::new(config.seed);
    let mut state = RunState::initialize(n, config.population_size, region, objective, &mut rngs.init);
    let mut conv = Convergence::new(config, state.global_best_fitness);
    for _ in 0..config.max_generations {
        ga_generation(&mut state, region, objective, config, &mut rngs.ga, Replacement::All);
        state.finish_generation();
        if conv.should_stop(state.global_best_fitness) {
            break;
        }
    }
    Ok(RunOutcome::from_state(state))
}

/// Global-best PSO with linearly decreasing inertia.
pub fn run_pso<T, O>(n: usize, region: &Region<T>, objective: &O, config: &OptimizerConfig) -> Result<RunOutcome<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    check_inputs(n, config)?;
    let mut rngs = Streams::new(config.seed);
    let mut state = RunState::initialize(n, config.population_size, region, objective, &mut rngs.init);
    let mut conv = Convergence::new(config, state.global_best_fitness);
    for generation in 0..config.max_generations {
        pso_step(&mut state, region, objective, config, generation, &mut rngs.pso);
        state.finish_generation();
        if conv.should_stop(state.global_best_fitness) {
            break;
        }
    }
    Ok(RunOutcome::from_state(state))
}

/// Hybrid GA-PSO. In the default interleaved schedule every generation runs
/// a GA pass over the particle positions and then one PSO step.
pub fn run_hybrid<T, O>(n: usize, region: &Region<T>, objective: &O, config: &OptimizerConfig) -> Result<RunOutcome<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    check_inputs(n, config)?;
    let mut rngs = Streams::new(config.seed);
    let mut state = RunState::initialize(n, config.population_size, region, objective, &mut rngs.init);
    let mut conv = Convergence::new(config, state.global_best_fitness);
    let ga_generations = match config.hybrid_schedule {
        HybridSchedule::Interleaved => None,
        HybridSchedule::Sequential { ga_fraction } => {
            Some((ga_fraction * config.max_generations as f64).floor() as usize)
        }
    };
    for generation in 0..config.max_generations {
        match ga_generations {
            None => {
                ga_generation(&mut state, region, objective, config, &mut rngs.ga, Replacement::Improving);
                pso_step(&mut state, region, objective, config, generation, &mut rngs.pso);
            }
            Some(g) if generation < g => {
                ga_generation(&mut state, region, objective, config, &mut rngs.ga, Replacement::All);
            }
            Some(_) => pso_step(&mut state, region, objective, config, generation, &mut rngs.pso),
        }
        state.finish_generation();
        if conv.should_stop(state.global_best_fitness) {
            break;
        }
    }
    Ok(RunOutcome::from_state(state))
}

/// Best of `budget` uniform random deployments, drawn in batches of
/// `batch` (one history entry per batch).
pub fn random_search<T, O, R>(
    n: usize,
    region: &Region<T>,
    objective: &O,
    budget: usize,
    batch: usize,
    rng: &mut R,
) -> RunState<T>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    assert!(budget >= 1 && batch >= 1, "random search needs a positive budget");
    let mut state: Option<RunState<T>> = None;
    let mut remaining = budget;
    while remaining > 0 {
        let size = batch.min(remaining);
        remaining -= size;
        let positions: Vec<_> = (0..size).map(|_| Deployment::random_with(n, region, rng)).collect();
        let scores = evaluate_all(objective, &positions);
        let population: Vec<_> = positions.into_iter().zip(scores).map(|(p, f)| Particle::new(p, f)).collect();
        let best = best_index(population.iter().map(|p| p.fitness));
        match state.as_mut() {
            None => {
                state = Some(RunState {
                    global_best: population[best].position.clone(),
                    global_best_fitness: population[best].fitness,
                    population,
                    generation: 1,
                    fitness_history: Vec::new(),
                    evaluations: size,
                });
                let s = state.as_mut().expect("just set");
                s.fitness_history.push(s.global_best_fitness);
            }
            Some(s) => {
                s.population = population;
                s.evaluations += size;
                s.refresh_bests();
                s.finish_generation();
            }
        }
    }
    state.expect("budget >= 1")
}

/// Random placement baseline with the same budget as `max_generations`
/// generations of `population_size` candidates.
pub fn run_random_baseline<T, O>(
    n: usize,
    region: &Region<T>,
    objective: &O,
    config: &OptimizerConfig,
) -> Result<RunOutcome<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    check_inputs(n, config)?;
    let mut rngs = Streams::new(config.seed);
    let budget = config.population_size * config.max_generations;
    let state = random_search(n, region, objective, budget, config.population_size, &mut rngs.init);
    Ok(RunOutcome::from_state(state))
}

/// Dispatches to the selected engine.
pub fn run_engine<T, O>(
    engine: Engine,
    n: usize,
    region: &Region<T>,
    objective: &O,
    config: &OptimizerConfig,
) -> Result<RunOutcome<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    match engine {
        Engine::Ga => run_ga(n, region, objective, config),
        Engine::Pso => run_pso(n, region, objective, config),
        Engine::Hybrid => run_hybrid(n, region, objective, config),
        Engine::Random => run_random_baseline(n, region, objective, config),
    }
}

/// Runs `engine` on the placement objective and evaluates the winner under
/// the same frozen sampler.
pub fn optimize<T: Scalar>(
    engine: Engine,
    n: usize,
    scenario: &Scenario<T>,
    sampler: &CoverageSampler<T>,
    weights: &FitnessWeights<T>,
    config: &OptimizerConfig,
) -> Result<(RunOutcome<T>, Evaluation<T>)> {
    let objective = PlacementObjective::new(*scenario, sampler.clone(), *weights)?;
    let outcome = run_engine(engine, n, &scenario.region, &objective, config)?;
    let eval = objective.evaluate(&outcome.best);
    Ok((outcome, eval))
}
