//! Subcommand implementations. Each returns `Ok(())` or a [`CliError`]
//! carrying the exit code.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wsn_core::evaluation::CoverageSampler;
use wsn_core::optimizers::{optimize, Engine, OptimizerConfig};
use wsn_core::search::{find_min_nodes, search_sampler_seed, verify_deployment, FeasibilityReport, Verification};
use wsn_core::stats::{wilcoxon_signed_rank, Alternative, Metric, PairedSample, WilcoxonResult};
use wsn_core::{Deployment64, Point, RunRecord, Scenario64};

use crate::config::{EnergyConfig, ExperimentConfig, ScenarioSpec};
use crate::error::{CliError, CliResult};
use crate::records::{append_records, read_sweep, write_pivot, write_sweep, SweepRow};
use crate::svg::write_svg;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct GlobalOptions {
    /// Overrides the seed taken from the config.
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub override_rc_check: bool,
    /// Record wall time as zero so outputs are byte-reproducible.
    pub no_timing: bool,
}

impl GlobalOptions {
    fn seed(&self, cfg: &ExperimentConfig) -> u64 {
        self.seed.unwrap_or(cfg.seeds[0])
    }

    fn seeds(&self, cfg: &ExperimentConfig) -> Vec<u64> {
        self.seed.map_or_else(|| cfg.seeds.clone(), |s| vec![s])
    }

    fn wall(&self, started: Instant) -> f64 {
        if self.no_timing {
            0.0
        } else {
            started.elapsed().as_secs_f64()
        }
    }

    fn prepare_out_dir(&self) -> CliResult<()> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| CliError::io(&self.out_dir, e))
    }

    fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

/// Coordinates as a JSON array of `[x, y]` pairs.
pub fn deployment_to_json(d: &Deployment64) -> String {
    let pairs: Vec<[f64; 2]> = d.iter().map(|p| [p.x, p.y]).collect();
    serde_json::to_string_pretty(&pairs).expect("coordinates serialize")
}

pub fn read_deployment(path: &Path) -> CliResult<Deployment64> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
    if pairs.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::Config(format!("{}: coordinates must be finite", path.display())));
    }
    Ok(pairs.into_iter().map(|[x, y]| Point::new(x, y)).collect())
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn parse_engine(name: &str) -> CliResult<Engine> {
    name.parse().map_err(CliError::Config)
}

fn load(config: &Path, scenario: &str, g: &GlobalOptions) -> CliResult<(ExperimentConfig, ScenarioSpec, Scenario64)> {
    let cfg = ExperimentConfig::load(config)?;
    let spec = cfg.scenario(scenario)?.clone();
    let built = spec.build(&cfg.energy, g.override_rc_check)?;
    Ok((cfg, spec, built))
}

/// Runs one engine at a fixed node count.
pub fn cmd_optimize(
    g: &GlobalOptions,
    config: &Path,
    scenario: &str,
    algorithm: &str,
    n_nodes: usize,
) -> CliResult<RunRecord> {
    let engine = parse_engine(algorithm)?;
    let (cfg, spec, scen) = load(config, scenario, g)?;
    if n_nodes == 0 {
        return Err(CliError::Config("--nodes must be at least 1".into()));
    }
    let seed = g.seed(&cfg);
    let opt = cfg.optimizer.clone().with_seed(seed);
    g.prepare_out_dir()?;

    let started = Instant::now();
    let sampler = CoverageSampler::with_scheme(
        &scen.region,
        cfg.search.k_search,
        search_sampler_seed(seed),
        cfg.search.search_sampling,
    );
    let (outcome, eval) = optimize(engine, n_nodes, &scen, &sampler, &cfg.search.weights, &opt)?;
    let record = RunRecord {
        scenario_id: spec.id(),
        algorithm: engine.to_string(),
        seed,
        n_nodes,
        coverage: eval.coverage,
        connectivity_ratio: eval.connectivity_ratio,
        is_connected: eval.is_connected,
        energy_total: eval.energy_total,
        fitness: eval.fitness,
        generations_used: outcome.generations_used(),
        wall_time_s: g.wall(started),
    };

    let stem = format!("{}_{}_n{}_s{}", spec.id(), engine, n_nodes, seed);
    write_text(&g.out(&format!("{stem}_deployment.json")), &deployment_to_json(&outcome.best))?;
    let mut history = String::from("generation,best_fitness\n");
    for (i, f) in outcome.state.fitness_history.iter().enumerate() {
        history += &format!("{i},{f:.9}\n");
    }
    write_text(&g.out(&format!("{stem}_history.csv")), &history)?;
    write_svg(&g.out(&format!("{stem}_deployment.svg")), &outcome.best, &scen)?;
    append_records(&g.out("runs.csv"), std::slice::from_ref(&record))?;
    println!(
        "{} {} n={} seed={}: coverage {:.4}, connectivity {:.4}{}, energy {:.4e} J, fitness {:.5}, {} generations",
        record.scenario_id,
        record.algorithm,
        n_nodes,
        seed,
        record.coverage,
        record.connectivity_ratio,
        if record.is_connected { " (connected)" } else { "" },
        record.energy_total,
        record.fitness,
        record.generations_used
    );
    Ok(record)
}

/// Report written by `min-nodes`, self-contained so `verify` can re-check it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub scenario_id: String,
    pub scenario: ScenarioSpec,
    pub energy: EnergyConfig,
    pub override_rc_check: bool,
    pub report: FeasibilityReport,
}

fn report_record(id: &str, report: &FeasibilityReport, seed: u64) -> RunRecord {
    RunRecord {
        scenario_id: id.to_string(),
        algorithm: report.engine.to_string(),
        seed,
        n_nodes: report.n,
        coverage: report.verified_coverage,
        connectivity_ratio: if report.is_connected { 1.0 } else { 0.0 },
        is_connected: report.is_connected,
        energy_total: report.energy_total,
        fitness: report.fitness,
        generations_used: report.generations_used,
        wall_time_s: report.wall_time_s,
    }
}

fn run_min_nodes(
    g: &GlobalOptions,
    cfg: &ExperimentConfig,
    scen: &Scenario64,
    engine: Engine,
    seed: u64,
) -> wsn_core::Result<FeasibilityReport> {
    let opt: OptimizerConfig = cfg.optimizer.clone().with_seed(seed);
    let mut report = find_min_nodes(scen, engine, &opt, &cfg.search)?;
    if g.no_timing {
        report.wall_time_s = 0.0;
    }
    Ok(report)
}

/// Minimal node-count search for one scenario and engine.
pub fn cmd_min_nodes(g: &GlobalOptions, config: &Path, scenario: &str, algorithm: &str) -> CliResult<ReportFile> {
    let engine = parse_engine(algorithm)?;
    let (cfg, spec, scen) = load(config, scenario, g)?;
    let seed = g.seed(&cfg);
    g.prepare_out_dir()?;
    let report = run_min_nodes(g, &cfg, &scen, engine, seed)?;
    let file = ReportFile {
        scenario_id: spec.id(),
        scenario: spec.clone(),
        energy: cfg.energy.clone(),
        override_rc_check: g.override_rc_check,
        report,
    };
    let stem = format!("{}_{}_s{}", spec.id(), engine, seed);
    write_text(
        &g.out(&format!("{stem}_report.json")),
        &serde_json::to_string_pretty(&file).expect("report serializes"),
    )?;
    write_text(&g.out(&format!("{stem}_deployment.json")), &deployment_to_json(&file.report.deployment))?;
    write_svg(&g.out(&format!("{stem}_deployment.svg")), &file.report.deployment, &scen)?;
    append_records(&g.out("min_nodes.csv"), &[report_record(&file.scenario_id, &file.report, seed)])?;
    let r = &file.report;
    println!(
        "{} {}: n = {} (lower bound {}), verified coverage {:.4} at K = {}, connected = {}, {} engine runs",
        file.scenario_id, engine, r.n, r.lower_bound, r.verified_coverage, r.k_verify, r.is_connected, r.attempts
    );
    Ok(file)
}

/// Which optimizer parameters a sweep runs with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParameterSets {
    /// The config's `optimizer` section; writes `sweep.csv`.
    #[default]
    Config,
    /// Both published presets; writes `sweep_set1.csv` and `sweep_set2.csv`.
    Both,
}

impl std::str::FromStr for ParameterSets {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "config" => Ok(Self::Config),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown parameter set `{other}` (expected config or both)")),
        }
    }
}

/// Runs `min-nodes` for every scenario, algorithm and seed; writes the long
/// CSV and the pivot table. Cells run on a pool of `jobs` threads.
///
/// With [`ParameterSets::Both`] the sweep runs once per preset and the rows
/// of both are returned, set 1 first.
pub fn cmd_sweep(
    g: &GlobalOptions,
    config: &Path,
    algorithms: &[String],
    jobs: Option<usize>,
    floor: bool,
    sets: ParameterSets,
) -> CliResult<Vec<SweepRow>> {
    let cfg = ExperimentConfig::load(config)?;
    let runs: Vec<(OptimizerConfig, &str)> = match sets {
        ParameterSets::Config => vec![(cfg.optimizer.clone(), "sweep")],
        ParameterSets::Both => {
            vec![(OptimizerConfig::parameter_set_1(), "sweep_set1"), (OptimizerConfig::parameter_set_2(), "sweep_set2")]
        }
    };
    let mut all = Vec::new();
    for (optimizer, stem) in runs {
        let cfg = ExperimentConfig { optimizer, ..cfg.clone() };
        all.extend(sweep_one(g, &cfg, algorithms, jobs, floor, stem)?);
    }
    if !all.iter().any(SweepRow::is_ok) {
        return Err(CliError::SearchExhausted("no sweep cell found a feasible deployment".into()));
    }
    Ok(all)
}

fn sweep_one(
    g: &GlobalOptions,
    cfg: &ExperimentConfig,
    algorithms: &[String],
    jobs: Option<usize>,
    floor: bool,
    stem: &str,
) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    if algorithms.is_empty() {
        return Err(CliError::Config("no algorithms given".into()));
    }
    let engines: Vec<Engine> = algorithms.iter().map(|a| parse_engine(a)).collect::<CliResult<_>>()?;
    let scenarios: Vec<(ScenarioSpec, Scenario64)> = cfg
        .scenarios
        .iter()
        .map(|s| Ok((s.clone(), s.build(&cfg.energy, g.override_rc_check)?)))
        .collect::<CliResult<_>>()?;
    g.prepare_out_dir()?;

    let mut cells = Vec::new();
    for (si, _) in scenarios.iter().enumerate() {
        for &engine in &engines {
            for seed in g.seeds(cfg) {
                cells.push((si, engine, seed));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let mut rows: Vec<(usize, SweepRow)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(si, engine, seed)| {
                let (spec, scen) = &scenarios[si];
                let id = spec.id();
                let (status, record) = match run_min_nodes(g, cfg, scen, engine, seed) {
                    Ok(report) => ("ok", report_record(&id, &report, seed)),
                    Err(e) => {
                        let status =
                            if matches!(e, wsn_core::Error::SearchExhausted { .. }) { "exhausted" } else { "error" };
                        let empty = RunRecord {
                            scenario_id: id.clone(),
                            algorithm: engine.to_string(),
                            seed,
                            n_nodes: 0,
                            coverage: 0.0,
                            connectivity_ratio: 0.0,
                            is_connected: false,
                            energy_total: 0.0,
                            fitness: 0.0,
                            generations_used: 0,
                            wall_time_s: 0.0,
                        };
                        (status, empty)
                    }
                };
                let row = SweepRow {
                    area: spec.area,
                    rs: spec.rs,
                    rc: spec.rc_or_default(),
                    status: status.to_string(),
                    record,
                };
                (si, row)
            })
            .collect()
    });
    rows.sort_by(|(sa, a), (sb, b)| {
        (sa, &a.record.algorithm, a.record.seed).cmp(&(sb, &b.record.algorithm, b.record.seed))
    });
    let rows: Vec<SweepRow> = rows.into_iter().map(|(_, r)| r).collect();
    write_sweep(&g.out(&format!("{stem}.csv")), &rows)?;
    let names: Vec<String> = engines.iter().map(|e| e.to_string()).collect();
    write_pivot(&g.out(&format!("{stem}_pivot.csv")), &rows, &names, floor)?;
    let ok = rows.iter().filter(|r| r.is_ok()).count();
    println!("{stem}: {ok} of {} cells succeeded; wrote {stem}.csv and {stem}_pivot.csv", rows.len());
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonFile {
    pub algorithm_a: String,
    pub algorithm_b: String,
    pub metric: String,
    pub pairs: usize,
    pub zeros_dropped: usize,
    pub result: WilcoxonResult,
    pub verdict: String,
}

/// Pairs two algorithms of a sweep CSV by (scenario, seed) and runs the
/// Wilcoxon signed-rank test on `metric(a) - metric(b)`.
pub fn cmd_compare(
    csv: &Path,
    algorithm_a: &str,
    algorithm_b: &str,
    metric: &str,
    alternative: Alternative,
    out_path: Option<&Path>,
) -> CliResult<ComparisonFile> {
    let metric: Metric = metric.parse().map_err(CliError::Config)?;
    let rows = read_sweep(csv)?;
    let collect = |alg: &str| -> BTreeMap<(String, u64), f64> {
        rows.iter()
            .filter(|r| r.is_ok() && r.record.algorithm == alg)
            .map(|r| ((r.record.scenario_id.clone(), r.record.seed), metric.of(&r.record)))
            .collect()
    };
    let (a, b) = (collect(algorithm_a), collect(algorithm_b));
    if a.is_empty() || b.is_empty() {
        return Err(CliError::Pairing(format!("no successful rows for `{algorithm_a}` or `{algorithm_b}`")));
    }
    if a.keys().ne(b.keys()) {
        let missing: Vec<String> = a
            .keys()
            .filter(|k| !b.contains_key(*k))
            .chain(b.keys().filter(|k| !a.contains_key(*k)))
            .map(|(s, seed)| format!("{s}/seed {seed}"))
            .collect();
        return Err(CliError::Pairing(format!("incomplete pairing, unmatched cells: {}", missing.join(", "))));
    }
    let sample = PairedSample::from_differences(
        (algorithm_a.to_string(), algorithm_b.to_string()),
        a.iter().map(|(k, va)| va - b[k]),
    );
    let result = wilcoxon_signed_rank(&sample, alternative)?;
    let direction = match result.w_plus.partial_cmp(&result.w_minus) {
        Some(std::cmp::Ordering::Less) => format!("{algorithm_a} tends lower"),
        Some(std::cmp::Ordering::Greater) => format!("{algorithm_a} tends higher"),
        _ => "no direction".to_string(),
    };
    let verdict = format!(
        "{algorithm_a} vs {algorithm_b} on {}: {} over {} pairs ({} ties dropped); {}; {} at alpha = 0.05",
        metric.name(),
        result,
        a.len(),
        sample.zeros_dropped,
        direction,
        if result.p_value < 0.05 { "significant" } else { "not significant" }
    );
    let file = ComparisonFile {
        algorithm_a: algorithm_a.to_string(),
        algorithm_b: algorithm_b.to_string(),
        metric: metric.name().to_string(),
        pairs: a.len(),
        zeros_dropped: sample.zeros_dropped,
        result,
        verdict,
    };
    if let Some(path) = out_path {
        write_text(path, &serde_json::to_string_pretty(&file).expect("comparison serializes"))?;
    }
    println!("{}", file.verdict);
    Ok(file)
}

/// Re-measures a `min-nodes` report with its own verification seed and
/// checks the numbers agree.
pub fn cmd_verify_report(path: &Path, k_verify: Option<usize>, verify_seed: Option<u64>) -> CliResult<Verification> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: ReportFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
    let scen = file.scenario.build(&file.energy, file.override_rc_check)?;
    let r = &file.report;
    let seed = verify_seed.unwrap_or(r.verification_seed);
    let k = k_verify.unwrap_or(r.k_verify);
    let v = verify_deployment(&r.deployment, &scen, seed, k);
    print_verification(&file.scenario_id, r.deployment.len(), &v, k, seed);
    if seed == r.verification_seed
        && k == r.k_verify
        && (v.coverage != r.verified_coverage || v.is_connected != r.is_connected)
    {
        return Err(CliError::Pairing(format!(
            "report disagrees with re-verification: coverage {} vs {}, connected {} vs {}",
            r.verified_coverage, v.coverage, r.is_connected, v.is_connected
        )));
    }
    Ok(v)
}

/// Verifies a coordinate file against a configured scenario.
pub fn cmd_verify_deployment(
    g: &GlobalOptions,
    deployment: &Path,
    config: &Path,
    scenario: &str,
    k_verify: usize,
    verify_seed: u64,
) -> CliResult<Verification> {
    let (_, spec, scen) = load(config, scenario, g)?;
    let d = read_deployment(deployment)?;
    let v = verify_deployment(&d, &scen, verify_seed, k_verify);
    print_verification(&spec.id(), d.len(), &v, k_verify, verify_seed);
    Ok(v)
}

fn print_verification(id: &str, n: usize, v: &Verification, k: usize, seed: u64) {
    println!(
        "{id}: {n} nodes, coverage {:.6} (K = {k}, seed {seed}), connectivity {:.4}, connected = {}, per-node energy ok = {} (max {:.4e} J)",
        v.coverage, v.connectivity_ratio, v.is_connected, v.per_node_energy_ok, v.max_node_energy
    );
}

/// Renders a coordinate file to SVG.
pub fn cmd_plot(
    g: &GlobalOptions,
    deployment: &Path,
    config: &Path,
    scenario: &str,
    out: Option<&Path>,
) -> CliResult<PathBuf> {
    let (_, spec, scen) = load(config, scenario, g)?;
    let d = read_deployment(deployment)?;
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => {
            g.prepare_out_dir()?;
            g.out(&format!("{}_deployment.svg", spec.id()))
        }
    };
    write_svg(&path, &d, &scen)?;
    println!("wrote {}", path.display());
    Ok(path)
}
