use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::connectivity::connectivity;
use super::coverage::{coverage, CoverageSampler};
use super::energy::{total_energy, transmit_energy};
use crate::error::{Error, Result};
use crate::geometry::{Deployment, Scenario};
use crate::scalar::Scalar;

/// Weights of the scalar fitness `w1 coverage + w2 connectivity - w3 energy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights<T> {
    pub coverage: T,
    pub connectivity: T,
    pub energy: T,
}

impl<T: Scalar> FitnessWeights<T> {
    pub fn new(coverage: T, connectivity: T, energy: T) -> Result<Self> {
        let w = Self { coverage, connectivity, energy };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.coverage, self.connectivity, self.energy];
        if all.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
        }
        if self.coverage + self.connectivity + self.energy <= T::zero() {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            coverage: self.coverage * factor,
            connectivity: self.connectivity * factor,
            energy: self.energy * factor,
        }
    }
}

impl<T: Scalar> Default for FitnessWeights<T> {
    fn default() -> Self {
        Self { coverage: T::of(0.6), connectivity: T::of(0.3), energy: T::of(0.1) }
    }
}

/// All objective metrics of one deployment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation<T> {
    pub coverage: T,
    pub connectivity_ratio: T,
    pub is_connected: bool,
    pub energy_total: T,
    /// `energy_total / (n * transmit_energy(rc))`, zero for `n <= 1`.
    pub energy_normalized: T,
    pub fitness: T,
}

/// Energy divided by `n` times the cost of one maximum-range hop.
pub fn normalized_energy<T: Scalar>(energy_total: T, n: usize, scenario: &Scenario<T>) -> T {
    if n <= 1 {
        return T::zero();
    }
    energy_total / (T::of_usize(n) * transmit_energy(scenario.rc, scenario))
}

/// Evaluates every metric and the weighted fitness.
pub fn fitness<T: Scalar>(
    deployment: &Deployment<T>,
    scenario: &Scenario<T>,
    sampler: &CoverageSampler<T>,
    weights: &FitnessWeights<T>,
) -> Result<Evaluation<T>> {
    weights.validate()?;
    Ok(evaluate_unchecked(deployment, scenario, sampler, weights))
}

fn evaluate_unchecked<T: Scalar>(
    deployment: &Deployment<T>,
    scenario: &Scenario<T>,
    sampler: &CoverageSampler<T>,
    weights: &FitnessWeights<T>,
) -> Evaluation<T> {
    let cov = coverage(deployment, scenario, sampler);
    let conn = connectivity(deployment, scenario);
    let energy_total = total_energy(deployment, scenario);
    let energy_normalized = normalized_energy(energy_total, deployment.len(), scenario);
    let fitness = weights.coverage * cov + weights.connectivity * conn.ratio - weights.energy * energy_normalized;
    Evaluation {
        coverage: cov,
        connectivity_ratio: conn.ratio,
        is_connected: conn.is_connected,
        energy_total,
        energy_normalized,
        fitness,
    }
}

/// Anything the engines can maximize.
pub trait Objective<T>: Sync {
    fn fitness(&self, deployment: &Deployment<T>) -> T;
}

impl<T, F> Objective<T> for F
where
    F: Fn(&Deployment<T>) -> T + Sync,
{
    fn fitness(&self, deployment: &Deployment<T>) -> T {
        self(deployment)
    }
}

/// The placement objective for one run: scenario, frozen sampler and weights,
/// with a counter of fitness evaluations.
#[derive(Debug)]
pub struct PlacementObjective<T> {
    scenario: Scenario<T>,
    sampler: CoverageSampler<T>,
    weights: FitnessWeights<T>,
    evaluations: AtomicUsize,
}

impl<T: Scalar> PlacementObjective<T> {
    pub fn new(scenario: Scenario<T>, sampler: CoverageSampler<T>, weights: FitnessWeights<T>) -> Result<Self> {
        weights.validate()?;
        Ok(Self { scenario, sampler, weights, evaluations: AtomicUsize::new(0) })
    }

    pub fn scenario(&self) -> &Scenario<T> {
        &self.scenario
    }

    pub fn sampler(&self) -> &CoverageSampler<T> {
        &self.sampler
    }

    pub fn weights(&self) -> &FitnessWeights<T> {
        &self.weights
    }

    pub fn evaluate(&self, deployment: &Deployment<T>) -> Evaluation<T> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        evaluate_unchecked(deployment, &self.scenario, &self.sampler, &self.weights)
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }
}

impl<T: Scalar> Objective<T> for PlacementObjective<T> {
    fn fitness(&self, deployment: &Deployment<T>) -> T {
        self.evaluate(deployment).fitness
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{random_deployment, Point, Region};
    use proptest::prelude::*;

    fn setup() -> (Scenario<f64>, CoverageSampler<f64>) {
        let s = Scenario::new(Region::square(100.0).unwrap(), 20.0).unwrap();
        let sampler = CoverageSampler::new(&s.region, 500, 1);
        (s, sampler)
    }

    #[test]
    fn empty_deployment_scores_zero() {
        let (s, sampler) = setup();
        let e = fitness(&Deployment::default(), &s, &sampler, &FitnessWeights::default()).unwrap();
        assert_eq!(e.fitness, 0.0);
        assert_eq!(e.coverage, 0.0);
        assert_eq!(e.connectivity_ratio, 0.0);
        assert_eq!(e.energy_total, 0.0);
    }

    #[test]
    fn saturated_connected_without_energy_weight() {
        let (s, sampler) = setup();
        let nodes =
            (0..=10).flat_map(|i| (0..=10).map(move |j| Point::new(i as f64 * 10.0, j as f64 * 10.0))).collect();
        let w = FitnessWeights::new(0.7, 0.2, 0.0).unwrap();
        let e = fitness(&Deployment::new(nodes), &s, &sampler, &w).unwrap();
        assert!(e.is_connected);
        assert_eq!(e.coverage, 1.0);
        assert!((e.fitness - 0.9).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero_weights() {
        let (s, sampler) = setup();
        let w = FitnessWeights { coverage: 0.0, connectivity: 0.0, energy: 0.0 };
        assert!(matches!(fitness(&Deployment::default(), &s, &sampler, &w), Err(Error::InvalidWeights(_))));
        assert!(FitnessWeights::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn deterministic_and_counted() {
        let (s, sampler) = setup();
        let d = random_deployment(12, &s.region, 5);
        let obj = PlacementObjective::new(s, sampler, FitnessWeights::default()).unwrap();
        let a = obj.evaluate(&d);
        let b = obj.evaluate(&d);
        assert_eq!(a.fitness.to_bits(), b.fitness.to_bits());
        assert_eq!(obj.evaluations(), 2);
        assert!(a.energy_normalized > 0.0 && a.energy_normalized < 2.0);
    }

    #[test]
    fn works_in_single_precision() {
        let s = Scenario::<f32>::new(Region::square(100.0).unwrap(), 20.0).unwrap();
        let sampler = CoverageSampler::new(&s.region, 500, 1);
        let d = random_deployment(10, &s.region, 2);
        let e32 = fitness(&d, &s, &sampler, &FitnessWeights::default()).unwrap();
        assert!((0.0..=1.0).contains(&e32.coverage));
        assert!(e32.fitness.is_finite());
    }

    proptest! {
        #[test]
        fn fitness_is_linear_in_weights(seed in 0u64..1000, n in 1usize..20, k in 0.1..10.0f64) {
            let (s, sampler) = setup();
            let d = random_deployment(n, &s.region, seed);
            let w = FitnessWeights::default();
            let a = fitness(&d, &s, &sampler, &w).unwrap().fitness;
            let b = fitness(&d, &s, &sampler, &w.scaled(k)).unwrap().fitness;
            prop_assert!((b - k * a).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn argmax_invariant_under_weight_scaling(seed in 0u64..1000, k in 0.1..10.0f64) {
            let (s, sampler) = setup();
            let cands: Vec<_> = (0..6).map(|i| random_deployment(10, &s.region, seed * 10 + i)).collect();
            let w = FitnessWeights::default();
            let argmax = |w: &FitnessWeights<f64>| {
                cands.iter().enumerate()
                    .map(|(i, d)| (i, fitness(d, &s, &sampler, w).unwrap().fitness))
                    .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b }).0
            };
            prop_assert_eq!(argmax(&w), argmax(&w.scaled(k)));
        }

        #[test]
        fn metrics_stay_in_range(seed in 0u64..1000, n in 0usize..30) {
            let (s, sampler) = setup();
            let d = random_deployment(n, &s.region, seed);
            let e = fitness(&d, &s, &sampler, &FitnessWeights::default()).unwrap();
            prop_assert!((0.0..=1.0).contains(&e.coverage));
            prop_assert!((0.0..=1.0).contains(&e.connectivity_ratio));
            prop_assert!(e.energy_total >= 0.0);
            if n >= 1 {
                prop_assert_eq!(e.is_connected, e.connectivity_ratio == 1.0);
            }
        }
    }
}
