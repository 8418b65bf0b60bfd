//! Differential evolution, rand/1/bin with generational greedy replacement.

use super::{require_size, DeParams};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::rng::Rng;

pub const MIN_POPULATION: usize = 5;

/// `base + f · (a − b)`, component-wise.
pub fn rand1_mutant(base: &[f64], a: &[f64], b: &[f64], f: f64) -> Vec<f64> {
    base.iter()
        .zip(a.iter().zip(b))
        .map(|(x, (y, z))| x + f * (y - z))
        .collect()
}

/// Binomial crossover: each coordinate comes from `mutant` with probability
/// `cr`, and coordinate `forced` always does. Draws one uniform per coordinate.
pub fn binomial_crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    forced: usize,
    rng: &mut Rng,
) -> Vec<f64> {
    target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&t, &m))| {
            let take = rng.chance(cr);
            if take || j == forced {
                m
            } else {
                t
            }
        })
        .collect()
}

/// Three distinct indices in `0..np`, all different from `target`.
fn partners(target: usize, np: usize, rng: &mut Rng) -> [usize; 3] {
    let mut out = [0usize; 3];
    let mut k = 0;
    while k < 3 {
        let r = rng.below(np);
        if r != target && !out[..k].contains(&r) {
            out[k] = r;
            k += 1;
        }
    }
    out
}

pub(super) fn evolve(p: &DeParams, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    require_size(pop, "de", MIN_POPULATION)?;
    let problem = pop.problem().clone();
    let np = pop.len();
    let n = problem.dim();

    for _ in 0..p.generations {
        let current = pop.individuals().to_vec();
        let mut next = current.clone();
        for i in 0..np {
            let [r1, r2, r3] = partners(i, np, rng);
            let mutant = rand1_mutant(current[r1].x(), current[r2].x(), current[r3].x(), p.f);
            let forced = rng.below(n);
            let mut trial = binomial_crossover(current[i].x(), &mutant, p.cr, forced, rng);
            problem.repair(&mut trial);
            let candidate = Individual::evaluate(&problem, trial)?;
            if candidate.f() <= current[i].f() {
                next[i] = candidate;
            }
        }
        pop.replace_all(next);
    }
    Ok(())
}
