use rand::Rng;
use rayon::prelude::*;

use crate::evaluation::Objective;
use crate::geometry::{Deployment, Point, Region};
use crate::scalar::Scalar;

/// One candidate deployment with its PSO memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle<T> {
    pub position: Deployment<T>,
    /// Fitness of `position`.
    pub fitness: T,
    /// Per-node velocity, meters per iteration.
    pub velocity: Vec<Point<T>>,
    pub personal_best: Deployment<T>,
    pub personal_best_fitness: T,
}

impl<T: Scalar> Particle<T> {
    pub fn new(position: Deployment<T>, fitness: T) -> Self {
        Self {
            velocity: vec![Point::default(); position.len()],
            personal_best: position.clone(),
            personal_best_fitness: fitness,
            position,
            fitness,
        }
    }

    /// Replaces the position (e.g. with a GA offspring) and stops the particle.
    pub fn replace_position(&mut self, position: Deployment<T>, fitness: T) {
        self.position = position;
        self.fitness = fitness;
        self.velocity.iter_mut().for_each(|v| *v = Point::default());
        self.refresh_personal_best();
    }

    pub(crate) fn refresh_personal_best(&mut self) {
        if self.fitness > self.personal_best_fitness {
            self.personal_best = self.position.clone();
            self.personal_best_fitness = self.fitness;
        }
    }
}

/// Population plus best-so-far bookkeeping for one engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunState<T> {
    pub population: Vec<Particle<T>>,
    pub global_best: Deployment<T>,
    pub global_best_fitness: T,
    /// Completed generations.
    pub generation: usize,
    /// Global best fitness after initialization (entry 0) and after every generation.
    pub fitness_history: Vec<T>,
    /// Fitness evaluations consumed so far.
    pub evaluations: usize,
}

impl<T: Scalar> RunState<T> {
    /// Random initial population of `size` deployments with `n` nodes each.
    pub fn initialize<O, R>(n: usize, size: usize, region: &Region<T>, objective: &O, rng: &mut R) -> Self
    where
        O: Objective<T> + ?Sized,
        R: Rng + ?Sized,
    {
        let positions: Vec<_> = (0..size).map(|_| Deployment::random_with(n, region, rng)).collect();
        let fitness = evaluate_all(objective, &positions);
        let population: Vec<_> = positions.into_iter().zip(fitness).map(|(p, f)| Particle::new(p, f)).collect();
        let best = best_index(population.iter().map(|p| p.fitness));
        let mut state = Self {
            global_best: population[best].position.clone(),
            global_best_fitness: population[best].fitness,
            population,
            generation: 0,
            fitness_history: Vec::new(),
            evaluations: size,
        };
        state.fitness_history.push(state.global_best_fitness);
        state
    }

    /// Promotes improved positions into personal and global bests.
    pub fn refresh_bests(&mut self) {
        for p in &mut self.population {
            p.refresh_personal_best();
            if p.personal_best_fitness > self.global_best_fitness {
                self.global_best = p.personal_best.clone();
                self.global_best_fitness = p.personal_best_fitness;
            }
        }
    }

    pub(crate) fn finish_generation(&mut self) {
        self.generation += 1;
        self.fitness_history.push(self.global_best_fitness);
    }

    /// Index of the best current position (first on ties).
    pub fn elite_index(&self) -> usize {
        best_index(self.population.iter().map(|p| p.fitness))
    }
}

/// Evaluates candidates in parallel; order of results matches the input.
pub(crate) fn evaluate_all<T, O>(objective: &O, candidates: &[Deployment<T>]) -> Vec<T>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    candidates.par_iter().map(|d| objective.fitness(d)).collect()
}

pub(crate) fn best_index<T: Scalar>(values: impl IntoIterator<Item = T>) -> usize {
    let mut best = 0;
    let mut best_v = T::neg_infinity();
    for (i, v) in values.into_iter().enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}
