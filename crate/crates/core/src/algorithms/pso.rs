//! Global-best particle swarm.
//!
//! Velocities start uniform in `[-vmax, vmax]` at every call, where `vmax`
//! is `max_velocity_fraction` of each width. A particle that would leave
//! the box is clamped onto the violated bound and its velocity in that
//! coordinate is zeroed. The population returned holds each particle's
//! personal best.

use super::{require_size, PsoParams};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::rng::Rng;

/// One velocity component update (before clamping).
pub fn velocity(
    p: &PsoParams,
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    u1: f64,
    u2: f64,
) -> f64 {
    p.inertia * v + p.cognitive * u1 * (pbest - x) + p.social * u2 * (gbest - x)
}

pub(super) fn evolve(p: &PsoParams, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    require_size(pop, "pso", 2)?;
    let problem = pop.problem().clone();
    let bounds = problem.bounds().clone();
    let n = problem.dim();
    let np = pop.len();

    let vmax: Vec<f64> = (0..n)
        .map(|i| p.max_velocity_fraction * bounds.width(i))
        .collect();
    let mut pbest: Vec<Individual> = pop.individuals().to_vec();
    let mut xs: Vec<Vec<f64>> = pbest.iter().map(|ind| ind.x().to_vec()).collect();
    let mut vs: Vec<Vec<f64>> = (0..np)
        .map(|_| (0..n).map(|i| rng.uniform_in(-vmax[i], vmax[i])).collect())
        .collect();
    let mut gbest = pop.champion_index().expect("non-empty");

    for _ in 0..p.generations {
        for k in 0..np {
            for i in 0..n {
                let (u1, u2) = (rng.uniform(), rng.uniform());
                let g = pbest[gbest].x()[i];
                let mut v = velocity(p, vs[k][i], xs[k][i], pbest[k].x()[i], g, u1, u2);
                v = v.clamp(-vmax[i], vmax[i]);
                let mut x = xs[k][i] + v;
                let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
                if x < lo {
                    x = lo;
                    v = 0.0;
                } else if x > hi {
                    x = hi;
                    v = 0.0;
                }
                xs[k][i] = x;
                vs[k][i] = v;
            }
            let mut probe = xs[k].clone();
            problem.repair(&mut probe);
            let cand = Individual::evaluate(&problem, probe)?;
            if cand.f() < pbest[k].f() {
                pbest[k] = cand;
                if pbest[k].f() < pbest[gbest].f() {
                    gbest = k;
                }
            }
        }
    }
    pop.replace_all(pbest);
    Ok(())
}
