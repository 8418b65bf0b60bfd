//! Monotonic basin hopping.
//!
//! Each trial perturbs every individual by up to `±perturbation · width`
//! per coordinate, runs the inner algorithm on the perturbed copy and keeps
//! it only if its champion strictly improves. Stops after `stop_after`
//! consecutive failures.

use super::{require_size, MbhParams};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::rng::Rng;

/// Returns the number of trials performed.
pub fn run(p: &MbhParams, pop: &mut Population, rng: &mut Rng) -> Result<usize> {
    require_size(pop, "mbh", 1)?;
    let problem = pop.problem().clone();
    let bounds = problem.bounds().clone();
    let mut failures = 0;
    let mut trials = 0;

    while failures < p.stop_after {
        trials += 1;
        let perturbed = pop
            .individuals()
            .iter()
            .map(|ind| {
                let mut x = ind.x().to_vec();
                for (i, v) in x.iter_mut().enumerate() {
                    *v += rng.uniform_in(-1.0, 1.0) * p.perturbation * bounds.width(i);
                }
                problem.repair(&mut x);
                Individual::evaluate(&problem, x)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut trial = Population::from_individuals(&problem, perturbed)?;
        p.inner.evolve(&mut trial, rng)?;
        if trial.champion()?.f() < pop.champion()?.f() {
            *pop = trial;
            failures = 0;
        } else {
            failures += 1;
        }
    }
    Ok(trials)
}

pub(super) fn evolve(p: &MbhParams, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    run(p, pop, rng).map(drop)
}
