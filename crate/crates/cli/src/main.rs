use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wsn_cli::commands::{self, ParameterSets};
use wsn_cli::{CliResult, GlobalOptions};
use wsn_core::stats::Alternative;

/// Sensor node placement experiments: GA, PSO, hybrid GA-PSO and random baseline.
#[derive(Debug, Parser)]
#[command(name = "wsn-place", version)]
struct Cli {
    /// Seed overriding the config's `seeds`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Accept scenarios whose communication radius is below twice the sensing radius.
    #[arg(long, global = true)]
    override_rc_check: bool,

    /// Write wall times as zero so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize a fixed number of nodes with one engine.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Scenario id or zero-based index.
        #[arg(long)]
        scenario: String,
        /// ga, pso, hybrid or random.
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        nodes: usize,
    },
    /// Find the smallest node count reaching the coverage target while connected.
    MinNodes {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        algorithm: String,
    },
    /// Run min-nodes for every scenario, algorithm and seed in a config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "ga,pso,hybrid")]
        algorithms: Vec<String>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Floor pivot-table means to integers.
        #[arg(long)]
        floor: bool,
        /// `config` uses the config's optimizer; `both` runs the two published presets.
        #[arg(long, default_value = "config")]
        parameter_sets: ParameterSets,
    },
    /// Wilcoxon signed-rank comparison of two algorithms in a sweep CSV.
    Compare {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// coverage, connectivity_ratio, n_nodes, wall_time_s or energy_total.
        #[arg(long, default_value = "n_nodes")]
        metric: String,
        /// two-sided, less (a < b) or greater (a > b).
        #[arg(long, default_value = "two-sided")]
        alternative: Alternative,
        /// JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a min-nodes report, or a coordinate file against a scenario.
    Verify {
        #[arg(long, conflicts_with = "deployment")]
        report: Option<PathBuf>,
        #[arg(long, requires_all = ["config", "scenario"])]
        deployment: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        scenario: Option<String>,
        /// Fresh sample count.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        verify_seed: Option<u64>,
    },
    /// Render a coordinate file as SVG.
    Plot {
        #[arg(long)]
        deployment: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    let g = GlobalOptions {
        seed: cli.seed,
        out_dir: cli.out_dir,
        override_rc_check: cli.override_rc_check,
        no_timing: cli.no_timing,
    };
    match cli.command {
        Command::Optimize { config, scenario, algorithm, nodes } => {
            commands::cmd_optimize(&g, &config, &scenario, &algorithm, nodes).map(drop)
        }
        Command::MinNodes { config, scenario, algorithm } => {
            commands::cmd_min_nodes(&g, &config, &scenario, &algorithm).map(drop)
        }
        Command::Sweep { config, algorithms, jobs, floor, parameter_sets } => {
            commands::cmd_sweep(&g, &config, &algorithms, jobs, floor, parameter_sets).map(drop)
        }
        Command::Compare { csv, a, b, metric, alternative, out } => {
            commands::cmd_compare(&csv, &a, &b, &metric, alternative, out.as_deref()).map(drop)
        }
        Command::Verify { report: Some(report), k, verify_seed, .. } => {
            commands::cmd_verify_report(&report, k, verify_seed).map(drop)
        }
        Command::Verify { deployment: Some(d), config: Some(c), scenario: Some(s), k, verify_seed, .. } => {
            commands::cmd_verify_deployment(&g, &d, &c, &s, k.unwrap_or(10_000), verify_seed.unwrap_or(0)).map(drop)
        }
        Command::Verify { .. } => {
            Err(wsn_cli::CliError::Config("verify needs --report, or --deployment with --config and --scenario".into()))
        }
        Command::Plot { deployment, config, scenario, out } => {
            commands::cmd_plot(&g, &deployment, &config, &scenario, out.as_deref()).map(drop)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
