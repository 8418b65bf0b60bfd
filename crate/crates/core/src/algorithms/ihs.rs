//! Improved harmony search. The population is the harmony memory.

use super::{require_size, IhsParams};
use crate::error::Result;
use crate::population::{random_component, Individual, Population};
use crate::rng::Rng;

/// Pitch-adjust rate and bandwidth at iteration `t` of `total`:
/// PAR grows linearly from `par_min`, bandwidth decays exponentially from `bw_max`.
pub fn schedule(p: &IhsParams, t: usize, total: usize) -> (f64, f64) {
    let frac = if total == 0 { 0.0 } else { t as f64 / total as f64 };
    let par = p.par_min + (p.par_max - p.par_min) * frac;
    let bw = p.bw_max * ((p.bw_min / p.bw_max).ln() * frac).exp();
    (par, bw)
}

pub(super) fn evolve(p: &IhsParams, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    require_size(pop, "ihs", 2)?;
    let problem = pop.problem().clone();
    let bounds = problem.bounds().clone();
    let n = problem.dim();
    let np = pop.len();

    for t in 0..p.iterations {
        let (par, bw) = schedule(p, t, p.iterations);
        let mut x = vec![0.0; n];
        for (j, xj) in x.iter_mut().enumerate() {
            if rng.chance(p.hmcr) {
                *xj = pop.individuals()[rng.below(np)].x()[j];
                if rng.chance(par) {
                    *xj += rng.uniform_in(-1.0, 1.0) * bw * bounds.width(j);
                }
            } else {
                *xj = random_component(&problem, j, rng);
            }
        }
        problem.repair(&mut x);
        let harmony = Individual::evaluate(&problem, x)?;
        let worst = pop.worst_index().expect("non-empty");
        if harmony.f() < pop.individuals()[worst].f() {
            pop.set(worst, harmony);
        }
    }
    Ok(())
}
