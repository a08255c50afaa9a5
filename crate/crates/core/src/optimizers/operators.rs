//! Genetic operators on deployments.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{clamp_to_region, Deployment, Point, Region};
use crate::scalar::Scalar;

/// Size-2 tournament: draws two contestants uniformly (with replacement)
/// and returns the fitter one, the first drawn on ties.
pub fn tournament<T: Scalar, R: Rng + ?Sized>(fitness: &[T], rng: &mut R) -> usize {
    let a = rng.gen_range(0..fitness.len());
    let b = rng.gen_range(0..fitness.len());
    if fitness[b] > fitness[a] {
        b
    } else {
        a
    }
}

/// Picks two parents by independent tournaments; returns their indices.
pub fn ga_select<T: Scalar, R: Rng + ?Sized>(fitness: &[T], rng: &mut R) -> Result<(usize, usize)> {
    if fitness.len() < 2 {
        return Err(Error::PopulationTooSmall(fitness.len()));
    }
    Ok((tournament(fitness, rng), tournament(fitness, rng)))
}

/// Uniform node-level crossover. Returns the child and whether the operator fired.
pub(crate) fn crossover_tracked<T: Scalar, R: Rng + ?Sized>(
    a: &Deployment<T>,
    b: &Deployment<T>,
    crossover_rate: f64,
    rng: &mut R,
) -> Result<(Deployment<T>, bool)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if !rng.gen_bool(crossover_rate) {
        return Ok((a.clone(), false));
    }
    let child = a.iter().zip(b.iter()).map(|(pa, pb)| if rng.gen_bool(0.5) { *pa } else { *pb }).collect();
    Ok((child, true))
}

/// With probability `crossover_rate` each child node is taken whole from
/// `a` or `b` with equal odds; otherwise the child is a copy of `a`.
pub fn ga_crossover<T: Scalar, R: Rng + ?Sized>(
    a: &Deployment<T>,
    b: &Deployment<T>,
    crossover_rate: f64,
    rng: &mut R,
) -> Result<Deployment<T>> {
    crossover_tracked(a, b, crossover_rate, rng).map(|(child, _)| child)
}

/// Displaces nodes in place; returns how many moved.
pub(crate) fn mutate_in_place<T: Scalar, R: Rng + ?Sized>(
    d: &mut Deployment<T>,
    mutation_rate: f64,
    range_fraction: f64,
    region: &Region<T>,
    rng: &mut R,
) -> usize {
    let fx = region.width() * T::of(range_fraction);
    let fy = region.height() * T::of(range_fraction);
    let mut moved = 0;
    for p in &mut d.nodes {
        if rng.gen_bool(mutation_rate) {
            let dx = if fx > T::zero() { rng.gen_range(-fx..=fx) } else { T::zero() };
            let dy = if fy > T::zero() { rng.gen_range(-fy..=fy) } else { T::zero() };
            *p = clamp_to_region(Point::new(p.x + dx, p.y + dy), region);
            moved += 1;
        }
    }
    moved
}

/// Each node independently, with probability `mutation_rate`, moves by a
/// uniform offset within +-10% of each region side and is clamped back in.
pub fn ga_mutate<T: Scalar, R: Rng + ?Sized>(
    d: &Deployment<T>,
    mutation_rate: f64,
    region: &Region<T>,
    rng: &mut R,
) -> Deployment<T> {
    let mut out = d.clone();
    mutate_in_place(&mut out, mutation_rate, 0.1, region, rng);
    out
}
