//! Uniform random search: each draw replaces the current worst individual
//! when strictly better.

use super::require_size;
use crate::error::Result;
use crate::population::{random_individual, Population};
use crate::rng::Rng;

pub(super) fn evolve(evaluations: usize, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    require_size(pop, "monte_carlo", 1)?;
    let problem = pop.problem().clone();
    for _ in 0..evaluations {
        let draw = random_individual(&problem, rng)?;
        let worst = pop.worst_index().expect("non-empty");
        if draw.f() < pop.individuals()[worst].f() {
            pop.set(worst, draw);
        }
    }
    Ok(())
}
