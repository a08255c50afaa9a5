//! Behavioural properties shared by the optimization engines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsn_core::optimizers::{random_search, run_engine, run_hybrid, run_pso, run_random_baseline};
use wsn_core::{
    CoverageSampler, Deployment64, Engine, FitnessWeights, Objective, OptimizerConfig, PlacementObjective, Point64,
    Region32, Region64, RunState, Scenario32, Scenario64,
};

fn objective(side: f64, rs: f64, seed: u64) -> PlacementObjective<f64> {
    let scenario = Scenario64::new(Region64::square(side).unwrap(), rs).unwrap();
    let sampler = CoverageSampler::new(&scenario.region, 200, seed);
    PlacementObjective::new(scenario, sampler, FitnessWeights::default()).unwrap()
}

fn small_config(seed: u64) -> OptimizerConfig {
    OptimizerConfig { population_size: 10, max_generations: 20, ..OptimizerConfig::default() }.with_seed(seed)
}

#[test]
fn best_fitness_history_never_decreases() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..30 {
        let engine = if case % 2 == 0 { Engine::Ga } else { Engine::Hybrid };
        let side = rng.gen_range(40.0..120.0);
        let obj = objective(side, rng.gen_range(8.0..25.0), case);
        let n = rng.gen_range(2..10);
        let out = run_engine(engine, n, &obj.scenario().region, &obj, &small_config(case)).unwrap();
        for w in out.state.fitness_history.windows(2) {
            assert!(w[1] >= w[0], "{engine} case {case}: {:?}", out.state.fitness_history);
        }
        assert_eq!(*out.state.fitness_history.last().unwrap(), out.best_fitness);
    }
}

#[test]
fn population_size_and_bounds_are_preserved() {
    let obj = objective(80.0, 15.0, 1);
    let region = obj.scenario().region;
    for engine in Engine::ALL {
        for seed in 0..3 {
            let cfg = small_config(seed);
            let out = run_engine(engine, 6, &region, &obj, &cfg).unwrap();
            assert!(out.best.all_inside(&region));
            assert_eq!(out.best.len(), 6);
            if engine != Engine::Random {
                assert_eq!(out.state.population.len(), cfg.population_size);
            }
            let cap = cfg.velocity_cap_fraction * region.min_side();
            for p in &out.state.population {
                assert!(p.position.all_inside(&region), "{engine}");
                assert!(p.velocity.iter().all(|v| v.x.abs() <= cap && v.y.abs() <= cap), "{engine}");
                assert!(p.personal_best.all_inside(&region), "{engine}");
                assert_eq!(p.position.len(), 6);
            }
        }
    }
}

#[test]
fn same_seed_gives_identical_runs() {
    let obj = objective(100.0, 20.0, 9);
    let region = obj.scenario().region;
    for engine in Engine::ALL {
        let a = run_engine(engine, 7, &region, &obj, &small_config(42)).unwrap();
        let b = run_engine(engine, 7, &region, &obj, &small_config(42)).unwrap();
        assert_eq!(a.best, b.best, "{engine}");
        assert_eq!(a.state.fitness_history, b.state.fitness_history, "{engine}");
        let c = run_engine(engine, 7, &region, &obj, &small_config(43)).unwrap();
        assert_ne!(a.best, c.best, "{engine}");
    }
}

#[test]
fn evaluation_budget_is_accounted() {
    let np = 10;
    for engine in Engine::ALL {
        let obj = objective(100.0, 20.0, 2);
        let cfg = small_config(5);
        let out = run_engine(engine, 5, &obj.scenario().region, &obj, &cfg).unwrap();
        let g = out.generations_used();
        let used = out.evaluations();
        assert_eq!(used, obj.evaluations(), "{engine}: counter disagrees with objective");
        match engine {
            Engine::Ga => assert_eq!(used, np + g * (np - 1)),
            Engine::Pso => assert_eq!(used, np + g * np),
            // one GA pass over the non-elite slots plus one PSO step per generation
            Engine::Hybrid => assert!(used >= np + g * np && used <= np + g * (2 * np - 1), "{used}"),
            Engine::Random => assert_eq!(used, np * cfg.max_generations),
        }
        if engine != Engine::Hybrid {
            assert!(used <= np * (cfg.max_generations + 1) + np);
        }
    }
}

#[test]
fn hybrid_without_ga_operators_is_pso() {
    let obj = objective(100.0, 15.0, 4);
    let region = obj.scenario().region;
    for seed in 0..3 {
        let cfg = OptimizerConfig { crossover_rate: 0.0, mutation_rate: 0.0, ..small_config(seed) };
        let h = run_hybrid(6, &region, &obj, &cfg).unwrap();
        let p = run_pso(6, &region, &obj, &cfg).unwrap();
        assert_eq!(h.best, p.best);
        assert_eq!(h.state.fitness_history, p.state.fitness_history);
    }
}

#[test]
fn engines_share_the_initial_population() {
    let obj = objective(100.0, 15.0, 4);
    let region = obj.scenario().region;
    let starts: Vec<f64> = [Engine::Ga, Engine::Pso, Engine::Hybrid]
        .into_iter()
        .map(|e| run_engine(e, 6, &region, &obj, &small_config(8)).unwrap().state.fitness_history[0])
        .collect();
    assert!(starts.windows(2).all(|w| w[0] == w[1]), "{starts:?}");
}

#[test]
fn pso_converges_on_a_convex_bowl() {
    let region = Region64::square(100.0).unwrap();
    let target = Point64::new(37.3, 61.8);
    let bowl = |d: &Deployment64| -d.nodes[0].distance_sq(&target);
    for seed in 0..10 {
        let cfg = OptimizerConfig {
            population_size: 20,
            max_generations: 200,
            convergence_epsilon: 0.0,
            convergence_patience: 0,
            ..OptimizerConfig::default()
        }
        .with_seed(seed);
        let out = run_pso(1, &region, &bowl, &cfg).unwrap();
        let miss = out.best.nodes[0].distance(&target);
        assert!(miss <= 1e-2, "seed {seed}: {miss}");
        assert!(out.generations_used() <= 200);
    }
}

#[test]
fn single_generation_never_loses_the_initial_best() {
    let obj = objective(60.0, 12.0, 7);
    for engine in [Engine::Ga, Engine::Pso, Engine::Hybrid] {
        for seed in 0..10 {
            let cfg = OptimizerConfig { population_size: 2, max_generations: 1, ..OptimizerConfig::default() }
                .with_seed(seed);
            let out = run_engine(engine, 4, &obj.scenario().region, &obj, &cfg).unwrap();
            assert!(out.best_fitness >= out.state.fitness_history[0], "{engine} seed {seed}");
        }
    }
}

#[test]
fn initial_state_holds_the_best_random_deployment() {
    let obj = objective(60.0, 12.0, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let state = RunState::initialize(5, 12, &obj.scenario().region, &obj, &mut rng);
    let best = state.population.iter().map(|p| p.fitness).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(state.global_best_fitness, best);
    assert_eq!(obj.fitness(&state.global_best), best);
    assert_eq!(state.fitness_history, vec![best]);
    assert_eq!(state.generation, 0);
}

#[test]
fn random_search_budget_one_and_monotone_in_budget() {
    let obj = objective(60.0, 12.0, 7);
    let region = obj.scenario().region;
    let single = random_search(4, &region, &obj, 1, 1, &mut ChaCha8Rng::seed_from_u64(2));
    let expected = Deployment64::random_with(4, &region, &mut ChaCha8Rng::seed_from_u64(2));
    assert_eq!(single.global_best, expected);
    assert_eq!(single.evaluations, 1);

    let mut last = f64::NEG_INFINITY;
    for budget in [1, 5, 20, 80, 200] {
        let s = random_search(4, &region, &obj, budget, 5, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(s.evaluations, budget);
        assert!(s.global_best_fitness >= last);
        last = s.global_best_fitness;
    }
}

#[test]
fn hybrid_beats_random_placement_at_equal_budget() {
    let obj = objective(100.0, 15.0, 3);
    let region = obj.scenario().region;
    let wins = (0..5)
        .filter(|&seed| {
            let cfg = OptimizerConfig::default().with_seed(seed);
            let h = run_hybrid(15, &region, &obj, &cfg).unwrap();
            let r = run_random_baseline(15, &region, &obj, &cfg).unwrap();
            h.best_fitness > r.best_fitness
        })
        .count();
    assert_eq!(wins, 5);
}

#[test]
fn engines_run_in_single_precision() {
    let scenario = Scenario32::new(Region32::square(50.0).unwrap(), 10.0).unwrap();
    let sampler = CoverageSampler::new(&scenario.region, 200, 0);
    let region = scenario.region;
    let obj = PlacementObjective::new(scenario, sampler, FitnessWeights::default()).unwrap();
    for engine in Engine::ALL {
        let out = run_engine(engine, 5, &region, &obj, &small_config(1)).unwrap();
        assert!(out.best.all_inside(&region));
        assert!(out.best_fitness.is_finite());
    }
}
