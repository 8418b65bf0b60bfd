//! Search spaces and objectives.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds", into = "RawBounds")]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawBounds> for Bounds {
    type Error = Error;
    fn try_from(raw: RawBounds) -> Result<Self> {
        Bounds::new(raw.lower, raw.upper)
    }
}

impl From<Bounds> for RawBounds {
    fn from(b: Bounds) -> Self {
        RawBounds {
            lower: b.lower,
            upper: b.upper,
        }
    }
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidBounds("dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidBounds(format!(
                "lower has {} entries, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBounds(format!("dimension {i} is not finite")));
            }
            if lo > hi {
                return Err(Error::InvalidBounds(format!(
                    "dimension {i}: lower {lo} exceeds upper {hi}"
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// The same interval `[lo, hi]` in every one of `dim` dimensions.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Bounds::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Width of dimension `i`.
    pub fn width(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// `true` when `inner` lies within `self` in every dimension.
    pub fn encloses(&self, inner: &Bounds) -> bool {
        inner.dim() == self.dim()
            && (0..self.dim())
                .all(|i| self.lower[i] <= inner.lower[i] && inner.upper[i] <= self.upper[i])
    }
}

/// A scalar objective. Implementations must be pure: equal inputs give
/// equal outputs, and concurrent calls are allowed.
pub trait Objective: Send + Sync {
    /// Objective value at `x`, or a message describing why it could not be computed.
    fn value(&self, x: &[f64]) -> std::result::Result<f64, String>;
}

struct FnObjective<F>(F);

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn value(&self, x: &[f64]) -> std::result::Result<f64, String> {
        Ok((self.0)(x))
    }
}

/// Box-constrained single-objective problem.
///
/// The last `integer_dim` components of the decision vector are integer
/// valued. Clones share the objective and the evaluation counter; use
/// [`Problem::with_fresh_counter`] to get an independently counted handle.
#[derive(Clone)]
pub struct Problem {
    name: Arc<str>,
    bounds: Bounds,
    integer_dim: usize,
    objective: Arc<dyn Objective>,
    evaluations: Arc<AtomicU64>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("integer_dim", &self.integer_dim)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        bounds: Bounds,
        integer_dim: usize,
        objective: Arc<dyn Objective>,
    ) -> Result<Self> {
        let n = bounds.dim();
        if integer_dim > n {
            return Err(Error::InvalidProblem(format!(
                "integer_dim {integer_dim} exceeds dimension {n}"
            )));
        }
        for i in n - integer_dim..n {
            if bounds.lower[i].ceil() > bounds.upper[i].floor() {
                return Err(Error::InvalidProblem(format!(
                    "integer dimension {i} has no integer in [{}, {}]",
                    bounds.lower[i], bounds.upper[i]
                )));
            }
        }
        Ok(Problem {
            name: Arc::from(name.into()),
            bounds,
            integer_dim,
            objective,
            evaluations: Arc::new(AtomicU64::new(0)),
        })
    }

    pub fn from_fn<F>(name: impl Into<String>, bounds: Bounds, integer_dim: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Problem::new(name, bounds, integer_dim, Arc::new(FnObjective(f)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn integer_dim(&self) -> usize {
        self.integer_dim
    }

    /// Index of the first integer component.
    pub fn continuous_dim(&self) -> usize {
        self.dim() - self.integer_dim
    }

    pub fn is_integer(&self, i: usize) -> bool {
        i >= self.continuous_dim()
    }

    /// Number of objective evaluations made through this counter.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// Same objective and bounds, counted separately.
    pub fn with_fresh_counter(&self) -> Problem {
        Problem {
            evaluations: Arc::new(AtomicU64::new(0)),
            ..self.clone()
        }
    }

    /// Same objective over `bounds`, which must lie within the current box.
    pub fn with_bounds(&self, bounds: Bounds) -> Result<Problem> {
        if bounds.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: bounds.dim(),
            });
        }
        if !self.bounds.encloses(&bounds) {
            return Err(Error::InvalidBounds(
                "narrowed bounds escape the original box".into(),
            ));
        }
        let mut p = Problem::new(
            self.name.to_string(),
            bounds,
            self.integer_dim,
            Arc::clone(&self.objective),
        )?;
        p.name = Arc::clone(&self.name);
        Ok(p)
    }

    /// Same dimension, integer block and bounds.
    pub fn same_space(&self, other: &Problem) -> bool {
        self.integer_dim == other.integer_dim && self.bounds == other.bounds
    }

    /// Checks that `x` is a valid decision vector.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (i, &v) in x.iter().enumerate() {
            let (lo, hi) = (self.bounds.lower[i], self.bounds.upper[i]);
            // NaN fails both comparisons
            if !(lo <= v && v <= hi) {
                return Err(Error::OutOfBounds {
                    index: i,
                    value: v,
                    lower: lo,
                    upper: hi,
                });
            }
            if self.is_integer(i) && v.fract() != 0.0 {
                return Err(Error::NonIntegral { index: i, value: v });
            }
        }
        Ok(())
    }

    /// Validates `x` and returns its objective value.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let value = self.objective.value(x).map_err(|message| Error::Objective {
            x: x.to_vec(),
            message,
        })?;
        if !value.is_finite() {
            return Err(Error::NonFinite {
                value,
                x: x.to_vec(),
            });
        }
        Ok(value)
    }

    /// Clamps each component onto its bound and rounds the integer block to
    /// the nearest admissible integer.
    pub fn repair(&self, x: &mut [f64]) {
        let cont = self.continuous_dim();
        for (i, v) in x.iter_mut().enumerate() {
            let (lo, hi) = (self.bounds.lower[i], self.bounds.upper[i]);
            if i < cont {
                *v = if v.is_nan() { lo } else { v.clamp(lo, hi) };
            } else {
                let r = if v.is_nan() { lo } else { v.round() };
                *v = r.clamp(lo.ceil(), hi.floor());
            }
        }
    }
}
