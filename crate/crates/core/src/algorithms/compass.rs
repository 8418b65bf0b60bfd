//! Compass search.
//!
//! Polls `x ± step · width(i) · eᵢ` in coordinate order (`+` before `-`),
//! moves to the first improving point and restarts the poll there. A poll
//! without improvement multiplies `step` by `reduction`. Stops when `step`
//! falls below `stop_step` or the evaluation budget is spent. Poll points
//! are projected onto the box; a projected point equal to the current one
//! is skipped without evaluation. Deterministic.

use super::{require_size, CompassParams};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::problem::Problem;

/// Runs compass search from `start`, returning the final point.
pub fn search(p: &CompassParams, problem: &Problem, start: Individual) -> Result<Individual> {
    let n = problem.dim();
    let mut x = start.x().to_vec();
    let mut fx = start.f();
    let mut step = p.start_step;
    let mut used = 0usize;

    'search: while step >= p.stop_step {
        let mut improved = false;
        'poll: for i in 0..n {
            for dir in [1.0, -1.0] {
                if used >= p.max_evaluations {
                    break 'search;
                }
                let mut y = x.clone();
                y[i] += dir * step * problem.bounds().width(i);
                problem.repair(&mut y);
                if y == x {
                    continue;
                }
                let fy = problem.evaluate(&y)?;
                used += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break 'poll;
                }
            }
        }
        if !improved {
            step *= p.reduction;
        }
    }
    Ok(Individual::cached(x, fx))
}

pub(super) fn evolve(p: &CompassParams, pop: &mut Population) -> Result<()> {
    require_size(pop, "compass", 1)?;
    let problem = pop.problem().clone();
    let result = search(p, &problem, pop.champion()?.clone())?;
    pop.offer_champion(result);
    Ok(())
}
