//! JSON experiment configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wsn_core::geometry::{EnergyModel, DEFAULT_COVERAGE_TARGET};
use wsn_core::optimizers::OptimizerConfig;
use wsn_core::search::SearchOptions;
use wsn_core::{Region, Scenario64};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// Defaults to `{M}x{N}_rs{rs}_rc{rc}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// Region size `[M, N]` in meters.
    pub area: [f64; 2],
    pub rs: f64,
    /// Defaults to `2 rs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rc: Option<f64>,
    #[serde(default = "default_target")]
    pub coverage_target: f64,
    /// Per-node energy cap in joules; absent means unlimited.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
}

fn default_target() -> f64 {
    DEFAULT_COVERAGE_TARGET
}

impl ScenarioSpec {
    pub fn square(side: f64, rs: f64) -> Self {
        Self { id: None, area: [side, side], rs, rc: None, coverage_target: DEFAULT_COVERAGE_TARGET, e_max: None }
    }

    pub fn rc_or_default(&self) -> f64 {
        self.rc.unwrap_or(2.0 * self.rs)
    }

    pub fn id(&self) -> String {
        self.id
            .clone()
            .unwrap_or_else(|| format!("{}x{}_rs{}_rc{}", self.area[0], self.area[1], self.rs, self.rc_or_default()))
    }

    pub fn build(&self, energy: &EnergyConfig, allow_short_rc: bool) -> CliResult<Scenario64> {
        let region = Region::new(self.area[0], self.area[1])?;
        let mut b = Scenario64::builder(region, self.rs)
            .rc(self.rc_or_default())
            .coverage_target(self.coverage_target)
            .energy(energy.model())
            .allow_short_rc(allow_short_rc);
        if let Some(e) = self.e_max {
            b = b.e_max(e);
        }
        Ok(b.build()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyConfig {
    /// J/bit.
    pub e_elec: f64,
    /// J/bit/m^2.
    pub e_amp: f64,
    pub packet_bits: u32,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        let m = EnergyModel::<f64>::default();
        Self { e_elec: m.e_elec, e_amp: m.e_amp, packet_bits: m.packet_bits }
    }
}

impl EnergyConfig {
    pub fn model(&self) -> EnergyModel<f64> {
        EnergyModel { e_elec: self.e_elec, e_amp: self.e_amp, packet_bits: self.packet_bits }
    }
}

/// Top-level configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenarios: Vec<ScenarioSpec>,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub energy: EnergyConfig,
    #[serde(default)]
    pub search: SearchOptions,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.scenarios.is_empty() {
            return Err(CliError::Config("`scenarios` must list at least one scenario".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("`seeds` must list at least one seed".into()));
        }
        let mut ids: Vec<String> = self.scenarios.iter().map(ScenarioSpec::id).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::Config(format!("duplicate scenario id `{}`", w[0])));
        }
        self.optimizer.validate().map_err(|e| CliError::Config(format!("optimizer: {e}")))?;
        self.search.weights.validate().map_err(|e| CliError::Config(format!("search.weights: {e}")))?;
        if self.search.retries_per_n == 0 || self.search.k_verify == 0 || self.search.k_search == 0 {
            return Err(CliError::Config("search: retries_per_n, k_verify and k_search must be >= 1".into()));
        }
        Ok(())
    }

    /// Looks a scenario up by id, or by zero-based index when `key` is numeric.
    pub fn scenario(&self, key: &str) -> CliResult<&ScenarioSpec> {
        self.scenarios
            .iter()
            .find(|s| s.id() == key)
            .or_else(|| key.parse::<usize>().ok().and_then(|i| self.scenarios.get(i)))
            .ok_or_else(|| {
                let known: Vec<String> = self.scenarios.iter().map(ScenarioSpec::id).collect();
                CliError::Config(format!("no scenario `{key}` (known: {})", known.join(", ")))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_json(r#"{"scenarios": [{"area": [100, 100], "rs": 20}]}"#).unwrap();
        assert_eq!(cfg.optimizer, OptimizerConfig::parameter_set_1());
        assert_eq!(cfg.energy, EnergyConfig::default());
        assert_eq!(cfg.energy.e_elec, 50e-9);
        assert_eq!(cfg.energy.e_amp, 100e-12);
        assert_eq!(cfg.energy.packet_bits, 4000);
        assert_eq!(cfg.search.k_search, 500);
        assert_eq!(cfg.seeds, vec![0]);
        let s = &cfg.scenarios[0];
        assert_eq!(s.rc_or_default(), 40.0);
        assert_eq!(s.coverage_target, 0.95);
        assert_eq!(s.id(), "100x100_rs20_rc40");
        assert!(cfg.scenario("100x100_rs20_rc40").is_ok());
        assert!(cfg.scenario("0").is_ok());
        assert!(cfg.scenario("nope").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = ExperimentConfig::from_json("{\n  \"scenarios\": [\n    {\"area\": [100], \"rs\": 20}\n  ]\n}")
            .unwrap_err();
        let msg = err.to_string();
        assert_eq!(err.exit_code(), 2);
        assert!(msg.contains("line 3"), "{msg}");
        let err = ExperimentConfig::from_json(r#"{"scenarios": [{"area": [1, 1], "rs": 1, "rsx": 2}]}"#).unwrap_err();
        assert!(err.to_string().contains("rsx"));
        let err = ExperimentConfig::from_json(r#"{"scenarios": []}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn short_rc_is_a_scenario_error() {
        let spec = ScenarioSpec { rc: Some(30.0), ..ScenarioSpec::square(100.0, 20.0) };
        let err = spec.build(&EnergyConfig::default(), false).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(spec.build(&EnergyConfig::default(), true).is_ok());
    }

    proptest! {
        #[test]
        fn json_round_trip(
            side in 1.0..1000.0f64, rs in 0.1..100.0f64, target in 0.01..1.0f64,
            pop in 2usize..200, gens in 1usize..500, cx in 0.0..1.0f64, seed in any::<u64>(),
            e_amp in 1e-13..1e-9f64, rc in proptest::option::of(1.0..500.0f64),
        ) {
            let cfg = ExperimentConfig {
                scenarios: vec![ScenarioSpec { id: Some("x".into()), rc, coverage_target: target, ..ScenarioSpec::square(side, rs) }],
                optimizer: OptimizerConfig { population_size: pop, max_generations: gens, crossover_rate: cx, seed, ..Default::default() },
                energy: EnergyConfig { e_amp, ..Default::default() },
                search: SearchOptions::default(),
                seeds: vec![seed, 1, 2],
            };
            let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
