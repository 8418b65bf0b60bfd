use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::rng::Rng;

/// A decision vector with its cached objective value.
///
/// Individuals are immutable and are only built from freshly evaluated
/// vectors, so `f` always equals the objective at `x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Individual {
    x: Vec<f64>,
    f: f64,
}

impl Individual {
    pub fn evaluate(problem: &Problem, x: Vec<f64>) -> Result<Self> {
        let f = problem.evaluate(&x)?;
        Ok(Individual { x, f })
    }

    /// For values the caller has just computed with `problem.evaluate(&x)`.
    pub(crate) fn cached(x: Vec<f64>, f: f64) -> Self {
        Individual { x, f }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn into_x(self) -> Vec<f64> {
        self.x
    }
}

/// Draws a uniformly random point of the problem's box and evaluates it.
///
/// Consumes exactly one draw per component.
pub fn random_individual(problem: &Problem, rng: &mut Rng) -> Result<Individual> {
    Individual::evaluate(problem, random_vector(problem, rng))
}

pub(crate) fn random_vector(problem: &Problem, rng: &mut Rng) -> Vec<f64> {
    (0..problem.dim())
        .map(|i| random_component(problem, i, rng))
        .collect()
}

pub(crate) fn random_component(problem: &Problem, i: usize, rng: &mut Rng) -> f64 {
    let b = problem.bounds();
    let (lo, hi) = (b.lower()[i], b.upper()[i]);
    if problem.is_integer(i) {
        rng.integer_in(lo.ceil() as i64, hi.floor() as i64) as f64
    } else {
        rng.uniform_in(lo, hi)
    }
}

/// Index of the minimum of `fs`, lowest index on ties.
pub(crate) fn argmin(fs: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, f) in fs.into_iter().enumerate() {
        match best {
            Some((_, bf)) if f >= bf => {}
            _ => best = Some((i, f)),
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the maximum of `fs`, lowest index on ties.
pub(crate) fn argmax(fs: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut worst: Option<(usize, f64)> = None;
    for (i, f) in fs.into_iter().enumerate() {
        match worst {
            Some((_, wf)) if f <= wf => {}
            _ => worst = Some((i, f)),
        }
    }
    worst.map(|(i, _)| i)
}

/// An ordered collection of individuals of one problem.
#[derive(Clone, Debug)]
pub struct Population {
    problem: Problem,
    individuals: Vec<Individual>,
    seed: u64,
}

impl PartialEq for Population {
    /// Compares contents only; the problem handle is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.individuals == other.individuals
    }
}

impl Population {
    /// `size` uniformly random individuals drawn from a generator seeded with `seed`.
    pub fn random(problem: &Problem, size: usize, seed: u64) -> Result<Self> {
        let mut rng = Rng::new(seed);
        let individuals = (0..size)
            .map(|_| random_individual(problem, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Population {
            problem: problem.clone(),
            individuals,
            seed,
        })
    }

    pub fn empty(problem: &Problem) -> Self {
        Population {
            problem: problem.clone(),
            individuals: Vec::new(),
            seed: 0,
        }
    }

    /// Wraps already evaluated individuals, checking that each is a valid point of `problem`.
    pub fn from_individuals(problem: &Problem, individuals: Vec<Individual>) -> Result<Self> {
        for ind in &individuals {
            problem.check(ind.x())?;
        }
        Ok(Population {
            problem: problem.clone(),
            individuals,
            seed: 0,
        })
    }

    /// Evaluates each vector and wraps the result.
    pub fn from_vectors(problem: &Problem, xs: Vec<Vec<f64>>) -> Result<Self> {
        let individuals = xs
            .into_iter()
            .map(|x| Individual::evaluate(problem, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Population {
            problem: problem.clone(),
            individuals,
            seed: 0,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn get(&self, i: usize) -> Option<&Individual> {
        self.individuals.get(i)
    }

    pub fn fitnesses(&self) -> Vec<f64> {
        self.individuals.iter().map(Individual::f).collect()
    }

    pub fn champion_index(&self) -> Option<usize> {
        argmin(self.individuals.iter().map(Individual::f))
    }

    pub fn worst_index(&self) -> Option<usize> {
        argmax(self.individuals.iter().map(Individual::f))
    }

    /// The individual with the lowest objective value, lowest index on ties.
    pub fn champion(&self) -> Result<&Individual> {
        self.champion_index()
            .map(|i| &self.individuals[i])
            .ok_or(Error::EmptyPopulation)
    }

    pub(crate) fn set(&mut self, i: usize, ind: Individual) {
        self.individuals[i] = ind;
    }

    pub(crate) fn replace_all(&mut self, individuals: Vec<Individual>) {
        debug_assert_eq!(individuals.len(), self.individuals.len());
        self.individuals = individuals;
    }

    /// Writes `ind` over the champion slot if it is strictly better.
    pub(crate) fn offer_champion(&mut self, ind: Individual) {
        if let Some(c) = self.champion_index() {
            if ind.f() < self.individuals[c].f() {
                self.individuals[c] = ind;
            }
        }
    }

    /// Re-draws every individual from `rng`, keeping the size.
    pub(crate) fn randomize(&mut self, rng: &mut Rng) -> Result<()> {
        for ind in self.individuals.iter_mut() {
            *ind = random_individual(&self.problem, rng)?;
        }
        Ok(())
    }

    /// Re-draws every individual from a generator seeded with `seed`.
    pub fn reinitialize(&mut self, seed: u64) -> Result<()> {
        let mut rng = Rng::new(seed);
        self.randomize(&mut rng)?;
        self.seed = seed;
        Ok(())
    }
}
