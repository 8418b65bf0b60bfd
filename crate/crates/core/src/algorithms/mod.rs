//! Population-transforming optimizers.
//!
//! Every algorithm mutates a [`Population`] in place, never worsens its
//! champion and never leaves the problem's box. Continuous operators round
//! the integer block to the nearest admissible integer before evaluation.
//!
//! Objective evaluations per call (`NP` = population size, `n` = dimension):
//!
//! | algorithm     | evaluations                                 |
//! |---------------|---------------------------------------------|
//! | `de`          | `generations · NP`                          |
//! | `sa_corana`   | at most `evaluations`                       |
//! | `pso`         | `generations · NP`                          |
//! | `sga`         | at most `generations · (NP − elitism)`      |
//! | `ihs`         | `iterations`                                |
//! | `compass`     | at most `max_evaluations`                   |
//! | `nelder_mead` | at most `n + iterations · (n + 2)`          |
//! | `monte_carlo` | `evaluations`                               |
//! | `multistart`  | `starts · (NP + inner)`                     |
//! | `mbh`         | `trials · (NP + inner)`, trials open-ended  |
//! | `null`        | 0                                           |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Population;
use crate::rng::Rng;

pub mod compass;
pub mod de;
pub mod ihs;
pub mod mbh;
pub mod monte_carlo;
pub mod multistart;
pub mod nelder_mead;
pub mod pso;
pub mod sa_corana;
pub mod sga;

fn check_range(name: &str, v: f64, lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<()> {
    let lo_ok = if lo_open { v > lo } else { v >= lo };
    let hi_ok = if hi_open { v < hi } else { v <= hi };
    if v.is_finite() && lo_ok && hi_ok {
        Ok(())
    } else {
        let l = if lo_open { '(' } else { '[' };
        let r = if hi_open { ')' } else { ']' };
        Err(Error::param(name, format!("{v} not in {l}{lo}, {hi}{r}")))
    }
}

fn check_positive_count(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::param(name, "must be at least 1"))
    } else {
        Ok(())
    }
}

fn require_size(pop: &Population, algorithm: &'static str, required: usize) -> Result<()> {
    if pop.len() < required {
        if required == 1 {
            return Err(Error::EmptyPopulation);
        }
        return Err(Error::PopulationTooSmall {
            algorithm,
            required,
            actual: pop.len(),
        });
    }
    Ok(())
}

/// Differential evolution, rand/1/bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeParams {
    pub generations: usize,
    /// Weight coefficient, in `(0, 2]`.
    #[serde(default = "DeParams::default_f")]
    pub f: f64,
    /// Crossover probability, in `[0, 1]`.
    #[serde(default = "DeParams::default_cr")]
    pub cr: f64,
}

impl DeParams {
    fn default_f() -> f64 {
        0.8
    }
    fn default_cr() -> f64 {
        0.9
    }

    pub fn validate(&self) -> Result<()> {
        check_range("f", self.f, 0.0, 2.0, true, false)?;
        check_range("cr", self.cr, 0.0, 1.0, false, false)
    }
}

/// Corana adaptive-neighbourhood simulated annealing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaCoranaParams {
    pub evaluations: usize,
    pub t_start: f64,
    pub t_final: f64,
    /// Coordinate cycles between neighbourhood-range adjustments.
    #[serde(default = "SaCoranaParams::default_step_adjust")]
    pub step_adjust_interval: usize,
    /// Range adjustments between temperature reductions.
    #[serde(default = "SaCoranaParams::default_temp_adjust")]
    pub temp_adjust_interval: usize,
    /// Initial (and maximum) neighbourhood, as a fraction of each width.
    #[serde(default = "SaCoranaParams::default_range")]
    pub initial_range: f64,
}

impl SaCoranaParams {
    fn default_step_adjust() -> usize {
        20
    }
    fn default_temp_adjust() -> usize {
        10
    }
    fn default_range() -> f64 {
        1.0
    }

    pub fn new(evaluations: usize, t_start: f64, t_final: f64) -> Self {
        SaCoranaParams {
            evaluations,
            t_start,
            t_final,
            step_adjust_interval: 20,
            temp_adjust_interval: 10,
            initial_range: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive_count("evaluations", self.evaluations)?;
        check_range("t_start", self.t_start, 0.0, f64::MAX, true, false)?;
        check_range("t_final", self.t_final, 0.0, self.t_start, true, true)?;
        check_positive_count("step_adjust_interval", self.step_adjust_interval)?;
        check_positive_count("temp_adjust_interval", self.temp_adjust_interval)?;
        check_range("initial_range", self.initial_range, 0.0, 1.0, true, false)
    }
}

/// Global-best particle swarm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsoParams {
    pub generations: usize,
    #[serde(default = "PsoParams::default_inertia")]
    pub inertia: f64,
    #[serde(default = "PsoParams::default_accel")]
    pub cognitive: f64,
    #[serde(default = "PsoParams::default_accel")]
    pub social: f64,
    #[serde(default = "PsoParams::default_vmax")]
    pub max_velocity_fraction: f64,
}

impl PsoParams {
    fn default_inertia() -> f64 {
        0.7298
    }
    fn default_accel() -> f64 {
        2.05 * 0.7298
    }
    fn default_vmax() -> f64 {
        0.5
    }

    pub fn new(generations: usize) -> Self {
        PsoParams {
            generations,
            inertia: Self::default_inertia(),
            cognitive: Self::default_accel(),
            social: Self::default_accel(),
            max_velocity_fraction: Self::default_vmax(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        // zero coefficients are allowed; they freeze the swarm
        check_range("inertia", self.inertia, 0.0, f64::MAX, false, false)?;
        check_range("cognitive", self.cognitive, 0.0, f64::MAX, false, false)?;
        check_range("social", self.social, 0.0, f64::MAX, false, false)?;
        check_range("max_velocity_fraction", self.max_velocity_fraction, 0.0, 1.0, true, false)
    }
}

/// Simple generational genetic algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgaParams {
    pub generations: usize,
    #[serde(default = "SgaParams::default_cx")]
    pub crossover_prob: f64,
    #[serde(default = "SgaParams::default_mut")]
    pub mutation_prob: f64,
    #[serde(default = "SgaParams::default_tournament")]
    pub tournament_size: usize,
    #[serde(default = "SgaParams::default_elitism")]
    pub elitism_count: usize,
}

impl SgaParams {
    fn default_cx() -> f64 {
        0.95
    }
    fn default_mut() -> f64 {
        0.02
    }
    fn default_tournament() -> usize {
        2
    }
    fn default_elitism() -> usize {
        1
    }

    pub fn new(generations: usize) -> Self {
        SgaParams {
            generations,
            crossover_prob: 0.95,
            mutation_prob: 0.02,
            tournament_size: 2,
            elitism_count: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("crossover_prob", self.crossover_prob, 0.0, 1.0, false, false)?;
        check_range("mutation_prob", self.mutation_prob, 0.0, 1.0, false, false)?;
        if self.tournament_size < 2 {
            return Err(Error::param("tournament_size", "must be at least 2"));
        }
        check_positive_count("elitism_count", self.elitism_count)
    }
}

/// Improved harmony search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IhsParams {
    pub iterations: usize,
    #[serde(default = "IhsParams::default_hmcr")]
    pub hmcr: f64,
    #[serde(default = "IhsParams::default_par_min")]
    pub par_min: f64,
    #[serde(default = "IhsParams::default_par_max")]
    pub par_max: f64,
    #[serde(default = "IhsParams::default_bw_min")]
    pub bw_min: f64,
    #[serde(default = "IhsParams::default_bw_max")]
    pub bw_max: f64,
}

impl IhsParams {
    fn default_hmcr() -> f64 {
        0.85
    }
    fn default_par_min() -> f64 {
        0.35
    }
    fn default_par_max() -> f64 {
        0.99
    }
    fn default_bw_min() -> f64 {
        1e-5
    }
    fn default_bw_max() -> f64 {
        1.0
    }

    pub fn new(iterations: usize) -> Self {
        IhsParams {
            iterations,
            hmcr: 0.85,
            par_min: 0.35,
            par_max: 0.99,
            bw_min: 1e-5,
            bw_max: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("hmcr", self.hmcr, 0.0, 1.0, true, true)?;
        check_range("par_min", self.par_min, 0.0, 1.0, true, true)?;
        check_range("par_max", self.par_max, self.par_min, 1.0, false, true)?;
        check_range("bw_min", self.bw_min, 0.0, f64::MAX, true, false)?;
        check_range("bw_max", self.bw_max, self.bw_min, f64::MAX, false, false)
    }
}

/// Compass (coordinate pattern) search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompassParams {
    pub max_evaluations: usize,
    #[serde(default = "CompassParams::default_start")]
    pub start_step: f64,
    #[serde(default = "CompassParams::default_stop")]
    pub stop_step: f64,
    #[serde(default = "CompassParams::default_reduction")]
    pub reduction: f64,
}

impl CompassParams {
    fn default_start() -> f64 {
        0.3
    }
    fn default_stop() -> f64 {
        1e-4
    }
    fn default_reduction() -> f64 {
        0.5
    }

    pub fn new(max_evaluations: usize) -> Self {
        CompassParams {
            max_evaluations,
            start_step: 0.3,
            stop_step: 1e-4,
            reduction: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("start_step", self.start_step, 0.0, 1.0, true, false)?;
        check_range("stop_step", self.stop_step, 0.0, self.start_step, true, true)?;
        check_range("reduction", self.reduction, 0.0, 1.0, true, true)
    }
}

/// Nelder-Mead simplex search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NelderMeadParams {
    pub iterations: usize,
    /// Stop once every vertex is within this fraction of each width from the best vertex.
    #[serde(default = "NelderMeadParams::default_tolerance")]
    pub tolerance: f64,
}

impl NelderMeadParams {
    fn default_tolerance() -> f64 {
        1e-4
    }

    pub fn validate(&self) -> Result<()> {
        check_range("tolerance", self.tolerance, 0.0, f64::MAX, false, false)
    }
}

/// Monotonic basin hopping around an inner local algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbhParams {
    pub inner: Box<Algorithm>,
    #[serde(default = "MbhParams::default_stop_after")]
    pub stop_after: usize,
    #[serde(default = "MbhParams::default_perturbation")]
    pub perturbation: f64,
}

impl MbhParams {
    fn default_stop_after() -> usize {
        5
    }
    fn default_perturbation() -> f64 {
        0.05
    }

    pub fn new(inner: Algorithm) -> Self {
        MbhParams {
            inner: Box::new(inner),
            stop_after: 5,
            perturbation: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive_count("stop_after", self.stop_after)?;
        check_range("perturbation", self.perturbation, 0.0, 1.0, false, false)?;
        self.inner.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloParams {
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultistartParams {
    pub inner: Box<Algorithm>,
    pub starts: usize,
}

/// An optimizer together with its parameters.
///
/// Serialized with a `name` tag, e.g. `{"name": "de", "generations": 500, "f": 0.8, "cr": 0.9}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Algorithm {
    De(DeParams),
    SaCorana(SaCoranaParams),
    Pso(PsoParams),
    Sga(SgaParams),
    Ihs(IhsParams),
    Compass(CompassParams),
    NelderMead(NelderMeadParams),
    Mbh(MbhParams),
    MonteCarlo(MonteCarloParams),
    Multistart(MultistartParams),
    /// Leaves the population untouched.
    Null,
}

/// Registered algorithm names with their parameter signatures.
pub const REGISTRY: &[(&str, &str)] = &[
    ("de", "generations, f=0.8, cr=0.9"),
    (
        "sa_corana",
        "evaluations, t_start, t_final, step_adjust_interval=20, temp_adjust_interval=10, initial_range=1",
    ),
    (
        "pso",
        "generations, inertia=0.7298, cognitive=1.49609, social=1.49609, max_velocity_fraction=0.5",
    ),
    (
        "sga",
        "generations, crossover_prob=0.95, mutation_prob=0.02, tournament_size=2, elitism_count=1",
    ),
    ("ihs", "iterations, hmcr=0.85, par_min=0.35, par_max=0.99, bw_min=1e-5, bw_max=1"),
    ("compass", "max_evaluations, start_step=0.3, stop_step=1e-4, reduction=0.5"),
    ("nelder_mead", "iterations, tolerance=1e-4"),
    ("mbh", "inner, stop_after=5, perturbation=0.05"),
    ("monte_carlo", "evaluations"),
    ("multistart", "inner, starts"),
    ("null", "(none)"),
];

impl Algorithm {
    pub fn de(generations: usize, f: f64, cr: f64) -> Self {
        Algorithm::De(DeParams { generations, f, cr })
    }

    pub fn sa_corana(evaluations: usize, t_start: f64, t_final: f64) -> Self {
        Algorithm::SaCorana(SaCoranaParams::new(evaluations, t_start, t_final))
    }

    pub fn nelder_mead(iterations: usize, tolerance: f64) -> Self {
        Algorithm::NelderMead(NelderMeadParams {
            iterations,
            tolerance,
        })
    }

    pub fn compass(max_evaluations: usize) -> Self {
        Algorithm::Compass(CompassParams::new(max_evaluations))
    }

    pub fn monte_carlo(evaluations: usize) -> Self {
        Algorithm::MonteCarlo(MonteCarloParams { evaluations })
    }

    pub fn multistart(inner: Algorithm, starts: usize) -> Self {
        Algorithm::Multistart(MultistartParams {
            inner: Box::new(inner),
            starts,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::De(_) => "de",
            Algorithm::SaCorana(_) => "sa_corana",
            Algorithm::Pso(_) => "pso",
            Algorithm::Sga(_) => "sga",
            Algorithm::Ihs(_) => "ihs",
            Algorithm::Compass(_) => "compass",
            Algorithm::NelderMead(_) => "nelder_mead",
            Algorithm::Mbh(_) => "mbh",
            Algorithm::MonteCarlo(_) => "monte_carlo",
            Algorithm::Multistart(_) => "multistart",
            Algorithm::Null => "null",
        }
    }

    /// Smallest population the algorithm accepts.
    pub fn min_population(&self) -> usize {
        match self {
            Algorithm::De(_) => de::MIN_POPULATION,
            Algorithm::Pso(_) | Algorithm::Ihs(_) => 2,
            Algorithm::Sga(p) => p.tournament_size.max(2),
            Algorithm::Mbh(p) => p.inner.min_population(),
            Algorithm::Multistart(p) => p.inner.min_population(),
            Algorithm::Null => 0,
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Algorithm::De(p) => p.validate(),
            Algorithm::SaCorana(p) => p.validate(),
            Algorithm::Pso(p) => p.validate(),
            Algorithm::Sga(p) => p.validate(),
            Algorithm::Ihs(p) => p.validate(),
            Algorithm::Compass(p) => p.validate(),
            Algorithm::NelderMead(p) => p.validate(),
            Algorithm::Mbh(p) => p.validate(),
            Algorithm::MonteCarlo(_) => Ok(()),
            Algorithm::Multistart(p) => p.inner.validate(),
            Algorithm::Null => Ok(()),
        }
    }

    /// Runs the algorithm once on `pop`.
    pub fn evolve(&self, pop: &mut Population, rng: &mut Rng) -> Result<()> {
        self.validate()?;
        match self {
            Algorithm::De(p) => de::evolve(p, pop, rng),
            Algorithm::SaCorana(p) => sa_corana::evolve(p, pop, rng),
            Algorithm::Pso(p) => pso::evolve(p, pop, rng),
            Algorithm::Sga(p) => sga::evolve(p, pop, rng),
            Algorithm::Ihs(p) => ihs::evolve(p, pop, rng),
            Algorithm::Compass(p) => compass::evolve(p, pop),
            Algorithm::NelderMead(p) => nelder_mead::evolve(p, pop),
            Algorithm::Mbh(p) => mbh::evolve(p, pop, rng),
            Algorithm::MonteCarlo(p) => monte_carlo::evolve(p.evaluations, pop, rng),
            Algorithm::Multistart(p) => multistart::evolve(&p.inner, p.starts, pop, rng).map(drop),
            Algorithm::Null => Ok(()),
        }
    }
}
