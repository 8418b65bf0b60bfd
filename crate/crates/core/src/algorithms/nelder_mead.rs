//! Nelder-Mead simplex search with projection onto the box.
//!
//! Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
//! The initial simplex is the champion plus one vertex per coordinate,
//! offset by 5% of that coordinate's width (inward when the outward step
//! would leave the box).

use super::{require_size, NelderMeadParams};
use crate::error::Result;
use crate::population::{Individual, Population};
use crate::problem::Problem;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const INITIAL_OFFSET: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Reflect,
    Expand,
    ContractOutside,
    ContractInside,
    Shrink,
}

pub struct Simplex<'p> {
    problem: &'p Problem,
    vertices: Vec<Individual>,
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

impl<'p> Simplex<'p> {
    pub fn around(problem: &'p Problem, start: Individual) -> Result<Self> {
        let b = problem.bounds();
        let mut vertices = vec![start.clone()];
        for i in 0..problem.dim() {
            let mut y = start.x().to_vec();
            let off = INITIAL_OFFSET * b.width(i);
            y[i] = if y[i] + off <= b.upper()[i] { y[i] + off } else { y[i] - off };
            problem.repair(&mut y);
            vertices.push(Individual::evaluate(problem, y)?);
        }
        Ok(Simplex { problem, vertices })
    }

    pub fn from_points(problem: &'p Problem, points: Vec<Vec<f64>>) -> Result<Self> {
        let vertices = points
            .into_iter()
            .map(|x| Individual::evaluate(problem, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Simplex { problem, vertices })
    }

    pub fn vertices(&self) -> &[Individual] {
        &self.vertices
    }

    pub fn best(&self) -> &Individual {
        self.vertices
            .iter()
            .min_by(|a, b| a.f().total_cmp(&b.f()))
            .expect("simplex has vertices")
    }

    fn point(&self, x: Vec<f64>) -> Result<Individual> {
        let mut x = x;
        self.problem.repair(&mut x);
        Individual::evaluate(self.problem, x)
    }

    /// Largest vertex distance from the best vertex, per coordinate, as a
    /// fraction of that coordinate's width.
    pub fn spread(&self) -> f64 {
        let best = self.best().x();
        let b = self.problem.bounds();
        let mut spread: f64 = 0.0;
        for v in &self.vertices {
            for (i, (x, y)) in v.x().iter().zip(best).enumerate() {
                let w = b.width(i);
                if w > 0.0 {
                    spread = spread.max((x - y).abs() / w);
                }
            }
        }
        spread
    }

    /// One Nelder-Mead iteration.
    pub fn step(&mut self) -> Result<Move> {
        self.vertices.sort_by(|a, b| a.f().total_cmp(&b.f()));
        let n = self.vertices.len() - 1;
        let dim = self.problem.dim();
        let mut centroid = vec![0.0; dim];
        for v in &self.vertices[..n] {
            for (c, x) in centroid.iter_mut().zip(v.x()) {
                *c += x / n as f64;
            }
        }
        let worst = self.vertices[n].clone();
        let f_best = self.vertices[0].f();
        let f_second = self.vertices[n - 1].f();

        let reflected = self.point(affine(&centroid, worst.x(), -REFLECT))?;
        if reflected.f() < f_best {
            let expanded = self.point(affine(&centroid, worst.x(), -EXPAND))?;
            if expanded.f() < reflected.f() {
                self.vertices[n] = expanded;
                return Ok(Move::Expand);
            }
            self.vertices[n] = reflected;
            return Ok(Move::Reflect);
        }
        if reflected.f() < f_second {
            self.vertices[n] = reflected;
            return Ok(Move::Reflect);
        }
        if reflected.f() < worst.f() {
            let c = self.point(affine(&centroid, reflected.x(), CONTRACT))?;
            if c.f() <= reflected.f() {
                self.vertices[n] = c;
                return Ok(Move::ContractOutside);
            }
        } else {
            let c = self.point(affine(&centroid, worst.x(), CONTRACT))?;
            if c.f() < worst.f() {
                self.vertices[n] = c;
                return Ok(Move::ContractInside);
            }
        }
        let best = self.vertices[0].x().to_vec();
        for k in 1..=n {
            let shrunk = affine(&best, self.vertices[k].x(), SHRINK);
            self.vertices[k] = self.point(shrunk)?;
        }
        Ok(Move::Shrink)
    }
}

/// Minimizes from `start`; returns the best vertex found.
pub fn search(p: &NelderMeadParams, problem: &Problem, start: Individual) -> Result<Individual> {
    if problem.dim() == 0 {
        return Ok(start);
    }
    let mut simplex = Simplex::around(problem, start)?;
    for _ in 0..p.iterations {
        if simplex.spread() < p.tolerance {
            break;
        }
        simplex.step()?;
    }
    Ok(simplex.best().clone())
}

pub(super) fn evolve(p: &NelderMeadParams, pop: &mut Population) -> Result<()> {
    require_size(pop, "nelder_mead", 1)?;
    let problem = pop.problem().clone();
    let result = search(p, &problem, pop.champion()?.clone())?;
    pop.offer_champion(result);
    Ok(())
}
