//! Corana adaptive-neighbourhood simulated annealing.
//!
//! Starting from the champion, coordinates are perturbed cyclically inside a
//! per-coordinate neighbourhood `step[i] · width[i]`. After every
//! `step_adjust_interval` full cycles each neighbourhood is rescaled toward a
//! 40-60% acceptance ratio (expansion factor `c = 2`); after every
//! `temp_adjust_interval` rescalings the temperature is multiplied by a
//! fixed ratio chosen so that it moves geometrically from `t_start` to
//! `t_final` over the evaluation budget. Proposals leaving the box are
//! redrawn uniformly within it.

use super::{require_size, SaCoranaParams};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::rng::Rng;

const RANGE_FACTOR: f64 = 2.0;
const ACCEPT_LOW: f64 = 0.4;
const ACCEPT_HIGH: f64 = 0.6;

/// Metropolis rule: improvements and ties always pass, a worsening `delta`
/// passes with probability `exp(-delta / temperature)`.
pub fn metropolis(delta: f64, temperature: f64, rng: &mut Rng) -> bool {
    if delta <= 0.0 {
        return true;
    }
    rng.uniform() < (-delta / temperature).exp()
}

/// Corana neighbourhood update for one coordinate given its acceptance ratio.
pub fn adjust_step(step: f64, ratio: f64, max_step: f64) -> f64 {
    let s = if ratio > ACCEPT_HIGH {
        step * (1.0 + RANGE_FACTOR * (ratio - ACCEPT_HIGH) / ACCEPT_LOW)
    } else if ratio < ACCEPT_LOW {
        step / (1.0 + RANGE_FACTOR * (ACCEPT_LOW - ratio) / ACCEPT_LOW)
    } else {
        step
    };
    s.min(max_step)
}

/// Number of temperature levels that fit in the budget (at least one).
pub fn temperature_levels(p: &SaCoranaParams, dim: usize) -> usize {
    (p.evaluations / (dim * p.step_adjust_interval * p.temp_adjust_interval)).max(1)
}

pub(super) fn evolve(p: &SaCoranaParams, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    require_size(pop, "sa_corana", 1)?;
    let problem = pop.problem().clone();
    let bounds = problem.bounds().clone();
    let n = problem.dim();

    let start = pop.champion()?.clone();
    let mut x = start.x().to_vec();
    let mut fx = start.f();
    let mut best = start;

    let levels = temperature_levels(p, n);
    let cooling = (p.t_final / p.t_start).powf(1.0 / levels as f64);
    let mut temperature = p.t_start;
    let mut step = vec![p.initial_range; n];
    let mut used = 0usize;

    'run: for _ in 0..levels {
        for _ in 0..p.temp_adjust_interval {
            let mut accepted = vec![0usize; n];
            for _ in 0..p.step_adjust_interval {
                for i in 0..n {
                    if used >= p.evaluations {
                        break 'run;
                    }
                    let width = bounds.width(i);
                    if width == 0.0 {
                        continue;
                    }
                    let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
                    let mut y = x.clone();
                    y[i] = x[i] + rng.uniform_in(-1.0, 1.0) * step[i] * width;
                    if y[i] < lo || y[i] > hi {
                        y[i] = rng.uniform_in(lo, hi);
                    }
                    problem.repair(&mut y);
                    let fy = problem.evaluate(&y)?;
                    used += 1;
                    if metropolis(fy - fx, temperature, rng) {
                        if fy < best.f() {
                            best = Individual::cached(y.clone(), fy);
                        }
                        x = y;
                        fx = fy;
                        accepted[i] += 1;
                    }
                }
            }
            for i in 0..n {
                let ratio = accepted[i] as f64 / p.step_adjust_interval as f64;
                step[i] = adjust_step(step[i], ratio, p.initial_range);
            }
        }
        temperature *= cooling;
    }

    pop.offer_champion(best);
    Ok(())
}
