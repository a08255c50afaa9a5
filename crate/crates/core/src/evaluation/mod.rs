//! Objective metrics for a deployment: Monte Carlo coverage, largest
//! connected component ratio, spanning-tree transmit energy, and the
//! weighted scalar fitness combining them.

mod connectivity;
mod coverage;
mod energy;
mod fitness;

pub use connectivity::{connectivity, Connectivity, UnionFind};
pub use coverage::{coverage, CoverageSampler, Sampling, SEARCH_SAMPLES};
pub use energy::{edge_energy_sum, total_energy, transmit_energy, RoutingTree};
pub use fitness::{fitness, normalized_energy, Evaluation, FitnessWeights, Objective, PlacementObjective};
