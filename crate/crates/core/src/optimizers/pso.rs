use rand::Rng;

use super::config::OptimizerConfig;
use super::state::{evaluate_all, RunState};
use crate::evaluation::Objective;
use crate::geometry::Region;
use crate::scalar::Scalar;

/// Moves one coordinate: inertia plus cognitive and social pulls, velocity
/// capped, position clamped to `[0, upper]` with the velocity zeroed on contact.
#[inline]
#[allow(clippy::too_many_arguments)]
fn advance<T: Scalar, R: Rng + ?Sized>(
    x: &mut T,
    v: &mut T,
    personal: T,
    global: T,
    upper: T,
    coeffs: (T, T, T),
    cap: T,
    rng: &mut R,
) {
    let (w, c1, c2) = coeffs;
    let r1: T = rng.gen_range(T::zero()..T::one());
    let r2: T = rng.gen_range(T::zero()..T::one());
    let next_v = w * *v + c1 * r1 * (personal - *x) + c2 * r2 * (global - *x);
    *v = next_v.max(-cap).min(cap);
    let next_x = *x + *v;
    if next_x < T::zero() {
        *x = T::zero();
        *v = T::zero();
    } else if next_x > upper {
        *x = upper;
        *v = T::zero();
    } else {
        *x = next_x;
    }
}

/// One velocity/position update of every particle followed by re-evaluation
/// and refresh of personal and global bests.
///
/// Random numbers are drawn sequentially (particle, node, x then y) so a
/// given generator state always produces the same move.
pub fn pso_step<T, O, R>(
    state: &mut RunState<T>,
    region: &Region<T>,
    objective: &O,
    config: &OptimizerConfig,
    generation: usize,
    rng: &mut R,
) where
    T: Scalar,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    let coeffs = (T::of(config.inertia(generation)), T::of(config.cognitive_weight), T::of(config.social_weight));
    let cap = T::of(config.velocity_cap_fraction) * region.min_side();
    let global = &state.global_best;
    for particle in &mut state.population {
        let nodes = particle.position.nodes.iter_mut();
        let vels = particle.velocity.iter_mut();
        let bests = particle.personal_best.nodes.iter();
        for (((pos, vel), pb), gb) in nodes.zip(vels).zip(bests).zip(global.nodes.iter()) {
            advance(&mut pos.x, &mut vel.x, pb.x, gb.x, region.width(), coeffs, cap, rng);
            advance(&mut pos.y, &mut vel.y, pb.y, gb.y, region.height(), coeffs, cap, rng);
        }
    }
    let positions: Vec<_> = state.population.iter().map(|p| p.position.clone()).collect();
    let fitness = evaluate_all(objective, &positions);
    state.evaluations += fitness.len();
    for (p, f) in state.population.iter_mut().zip(fitness) {
        p.fitness = f;
    }
    state.refresh_bests();
}
