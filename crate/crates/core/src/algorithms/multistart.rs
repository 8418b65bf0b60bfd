//! Generalised multistart: repeatedly re-randomize a working copy, run the
//! inner algorithm, and remember the best champion ever seen.
//!
//! Each start re-draws the working population from `rng` before handing the
//! same generator to the inner algorithm. The final population is the last
//! working population; if the best-ever champion beats its champion, it
//! replaces the worst slot.

use super::{require_size, Algorithm};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::rng::Rng;

/// Returns the champion of every start, in order.
pub fn evolve(
    inner: &Algorithm,
    starts: usize,
    pop: &mut Population,
    rng: &mut Rng,
) -> Result<Vec<Individual>> {
    require_size(pop, "multistart", 1)?;
    if starts == 0 {
        return Ok(Vec::new());
    }
    let mut best = pop.champion()?.clone();
    let mut working = pop.clone();
    let mut champions = Vec::with_capacity(starts);
    for _ in 0..starts {
        working.randomize(rng)?;
        inner.evolve(&mut working, rng)?;
        let c = working.champion()?.clone();
        if c.f() < best.f() {
            best = c.clone();
        }
        champions.push(c);
    }
    if best.f() < working.champion()?.f() {
        let w = working.worst_index().expect("non-empty");
        working.set(w, best);
    }
    *pop = working;
    Ok(champions)
}
