use serde::{Deserialize, Serialize};

/// Outcome of one engine run on one scenario, the row type of result tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub n_nodes: usize,
    pub coverage: f64,
    pub connectivity_ratio: f64,
    pub is_connected: bool,
    pub energy_total: f64,
    pub fitness: f64,
    pub generations_used: usize,
    pub wall_time_s: f64,
}
