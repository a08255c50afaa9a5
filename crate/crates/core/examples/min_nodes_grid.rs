//! Minimal node counts for GA, PSO and hybrid on square regions.
//!
//! Usage: `cargo run --release --example min_nodes_grid -- [side] [seed]`

use std::time::Instant;

use wsn_core::optimizers::{Engine, OptimizerConfig};
use wsn_core::search::{analytic_lower_bound, find_min_nodes, SearchOptions};
use wsn_core::{Region, Scenario};

fn main() {
    let mut args = std::env::args().skip(1);
    let side: f64 = args.next().map_or(100.0, |s| s.parse().expect("side"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let config = OptimizerConfig::parameter_set_1().with_seed(seed);
    let options = SearchOptions::default();
    println!("area\trs\trc\tbound\tga\tpso\thybrid\tseconds");
    for rs in [10.0, 15.0, 20.0, 25.0] {
        let scenario = Scenario::new(Region::square(side).unwrap(), rs).unwrap();
        let t = Instant::now();
        let cells: Vec<String> = [Engine::Ga, Engine::Pso, Engine::Hybrid]
            .into_iter()
            .map(|e| match find_min_nodes(&scenario, e, &config, &options) {
                Ok(r) => format!("{} ({:.3})", r.n, r.verified_coverage),
                Err(err) => format!("- ({err})"),
            })
            .collect();
        println!(
            "{side}x{side}\t{rs}\t{}\t{}\t{}\t{:.1}",
            2.0 * rs,
            analytic_lower_bound(&scenario),
            cells.join("\t"),
            t.elapsed().as_secs_f64()
        );
    }
}
