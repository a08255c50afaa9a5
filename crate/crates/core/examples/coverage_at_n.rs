//! Verified coverage each engine reaches at a fixed node count.
//!
//! Usage: `cargo run --release --example coverage_at_n -- side rs n [seeds] [generations] [energy_weight]`

use std::time::Instant;

use wsn_core::evaluation::{CoverageSampler, FitnessWeights, Sampling};
use wsn_core::optimizers::{optimize, Engine, OptimizerConfig};
use wsn_core::search::{search_sampler_seed, verify_deployment};
use wsn_core::{Region, Scenario};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("number")).collect();
    let (side, rs, n) = (args[0], args[1], args[2] as usize);
    let seeds = args.get(3).copied().unwrap_or(3.0) as u64;
    let generations = args.get(4).copied().unwrap_or(50.0) as usize;
    let weights = FitnessWeights::new(0.6, 0.3, args.get(5).copied().unwrap_or(0.1)).unwrap();
    let scenario = Scenario::new(Region::square(side).unwrap(), rs).unwrap();
    for engine in Engine::ALL {
        let t = Instant::now();
        let mut line = format!("{engine:>7}:");
        for seed in 0..seeds {
            let sampler =
                CoverageSampler::with_scheme(&scenario.region, 500, search_sampler_seed(seed), Sampling::Stratified);
            let config =
                OptimizerConfig { max_generations: generations, ..OptimizerConfig::parameter_set_1() }.with_seed(seed);
            let (out, eval) = optimize(engine, n, &scenario, &sampler, &weights, &config).unwrap();
            let v = verify_deployment(&out.best, &scenario, 12345, 10_000);
            line += &format!(
                "  [{:.3}/{:.3} {} g{}]",
                eval.coverage,
                v.coverage,
                if v.is_connected { "C" } else { "-" },
                out.generations_used()
            );
        }
        println!("{line}  {:.2}s", t.elapsed().as_secs_f64());
    }
}
