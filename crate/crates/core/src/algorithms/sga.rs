//! Simple generational GA: tournament selection, blend crossover on the
//! continuous block, uniform-pick crossover on the integer block, uniform
//! resampling mutation, and elitism.

use super::{require_size, SgaParams};
use crate::error::Result;
use crate::population::{random_component, Individual, Population};
use crate::rng::Rng;

/// Draws `size` indices with replacement and returns the fittest; the
/// earliest draw wins ties.
pub fn tournament(fitness: &[f64], size: usize, rng: &mut Rng) -> usize {
    let mut winner = rng.below(fitness.len());
    for _ in 1..size {
        let c = rng.below(fitness.len());
        if fitness[c] < fitness[winner] {
            winner = c;
        }
    }
    winner
}

pub(super) fn evolve(p: &SgaParams, pop: &mut Population, rng: &mut Rng) -> Result<()> {
    require_size(pop, "sga", p.tournament_size.max(2))?;
    let problem = pop.problem().clone();
    let n = problem.dim();
    let cont = problem.continuous_dim();
    let np = pop.len();
    let elite = p.elitism_count.min(np);

    for _ in 0..p.generations {
        let parents = pop.individuals().to_vec();
        let fitness: Vec<f64> = parents.iter().map(Individual::f).collect();
        let mut order: Vec<usize> = (0..np).collect();
        order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));

        let mut elites = order[..elite].to_vec();
        elites.sort_unstable();
        let mut next: Vec<Individual> = elites.iter().map(|&i| parents[i].clone()).collect();
        while next.len() < np {
            let a = &parents[tournament(&fitness, p.tournament_size, rng)];
            let b = &parents[tournament(&fitness, p.tournament_size, rng)];
            let mut child = a.x().to_vec();
            if rng.chance(p.crossover_prob) {
                let alpha = rng.uniform();
                for j in 0..n {
                    child[j] = if j < cont {
                        alpha * a.x()[j] + (1.0 - alpha) * b.x()[j]
                    } else if rng.chance(0.5) {
                        a.x()[j]
                    } else {
                        b.x()[j]
                    };
                }
            }
            for (j, c) in child.iter_mut().enumerate() {
                if rng.chance(p.mutation_prob) {
                    *c = random_component(&problem, j, rng);
                }
            }
            // convex combinations can round a hair outside the box
            problem.repair(&mut child);
            let ind = if child == a.x() {
                a.clone()
            } else {
                Individual::evaluate(&problem, child)?
            };
            next.push(ind);
        }
        pop.replace_all(next);
    }
    Ok(())
}
