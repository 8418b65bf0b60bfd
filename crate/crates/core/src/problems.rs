//! Built-in benchmark problems.
//!
//! Definitions (all minimized):
//!
//! | name       | objective                                                        | box                 |
//! |------------|------------------------------------------------------------------|---------------------|
//! | rastrigin  | `10n + Σ (xᵢ² − 10 cos 2πxᵢ)`                                     | `[-5.12, 5.12]ⁿ`    |
//! | rosenbrock | `Σ 100(xᵢ₊₁ − xᵢ²)² + (1 − xᵢ)²`                                  | `[-5, 10]ⁿ`, n ≥ 2  |
//! | schwefel   | `418.9828872724339 n − Σ xᵢ sin √|xᵢ|`                             | `[-500, 500]ⁿ`      |
//! | griewank   | `Σ xᵢ²/4000 − Π cos(xᵢ/√i) + 1`, `i` 1-based                       | `[-600, 600]ⁿ`      |
//! | branin     | `(x₂ − b x₁² + c x₁ − 6)² + 10(1 − t) cos x₁ + 10`                 | `[-5,10]×[0,15]`    |
//! | himmelblau | `(x² + y − 11)² + (x + y² − 7)²`                                  | `[-6, 6]²`          |
//! | knapsack   | `−Σ vᵢxᵢ` if feasible, else `Σ wᵢxᵢ − C`                           | `{0,1}ᵐ`            |
//!
//! with `b = 5.1/(4π²)`, `c = 5/π`, `t = 1/(8π)` for Branin.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Bounds, Problem};

pub const SCHWEFEL_OFFSET: f64 = 418.982_887_272_433_9;

fn require_dim(name: &str, dim: usize, min: usize) -> Result<()> {
    if dim < min {
        return Err(Error::param("dim", format!("{name} needs dim >= {min}, got {dim}")));
    }
    Ok(())
}

pub fn rastrigin(dim: usize) -> Result<Problem> {
    require_dim("rastrigin", dim, 1)?;
    Problem::from_fn("rastrigin", Bounds::uniform(dim, -5.12, 5.12)?, 0, |x| {
        10.0 * x.len() as f64
            + x.iter()
                .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos())
                .sum::<f64>()
    })
}

pub fn rosenbrock(dim: usize) -> Result<Problem> {
    require_dim("rosenbrock", dim, 2)?;
    Problem::from_fn("rosenbrock", Bounds::uniform(dim, -5.0, 10.0)?, 0, |x| {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    })
}

pub fn schwefel(dim: usize) -> Result<Problem> {
    require_dim("schwefel", dim, 1)?;
    Problem::from_fn("schwefel", Bounds::uniform(dim, -500.0, 500.0)?, 0, |x| {
        SCHWEFEL_OFFSET * x.len() as f64 - x.iter().map(|&v| v * v.abs().sqrt().sin()).sum::<f64>()
    })
}

pub fn griewank(dim: usize) -> Result<Problem> {
    require_dim("griewank", dim, 1)?;
    Problem::from_fn("griewank", Bounds::uniform(dim, -600.0, 600.0)?, 0, |x| {
        let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
        let prod: f64 = x
            .iter()
            .enumerate()
            .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
            .product();
        sum - prod + 1.0
    })
}

pub fn branin() -> Result<Problem> {
    let bounds = Bounds::new(vec![-5.0, 0.0], vec![10.0, 15.0])?;
    Problem::from_fn("branin", bounds, 0, |x| {
        let b = 5.1 / (4.0 * PI * PI);
        let c = 5.0 / PI;
        let t = 1.0 / (8.0 * PI);
        (x[1] - b * x[0] * x[0] + c * x[0] - 6.0).powi(2) + 10.0 * (1.0 - t) * x[0].cos() + 10.0
    })
}

pub fn himmelblau() -> Result<Problem> {
    Problem::from_fn("himmelblau", Bounds::uniform(2, -6.0, 6.0)?, 0, |x| {
        (x[0] * x[0] + x[1] - 11.0).powi(2) + (x[0] + x[1] * x[1] - 7.0).powi(2)
    })
}

/// 0-1 knapsack data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub capacity: f64,
}

impl KnapsackInstance {
    pub fn new(values: Vec<f64>, weights: Vec<f64>, capacity: f64) -> Result<Self> {
        let inst = KnapsackInstance {
            values,
            weights,
            capacity,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::param("values", "knapsack needs at least one item"));
        }
        if self.values.len() != self.weights.len() {
            return Err(Error::param(
                "weights",
                format!(
                    "{} values but {} weights",
                    self.values.len(),
                    self.weights.len()
                ),
            ));
        }
        let positive = |v: &f64| v.is_finite() && *v > 0.0;
        if !self.values.iter().all(positive) {
            return Err(Error::param("values", "all values must be positive and finite"));
        }
        if !self.weights.iter().all(positive) {
            return Err(Error::param("weights", "all weights must be positive and finite"));
        }
        if !positive(&self.capacity) {
            return Err(Error::param("capacity", "capacity must be positive and finite"));
        }
        Ok(())
    }

    pub fn items(&self) -> usize {
        self.values.len()
    }

    /// Parses `m capacity` followed by `m` lines of `value weight`.
    /// Blank lines are ignored.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let pair = |lineno: usize, l: &str| -> Result<(String, String)> {
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(lineno, format!("expected 2 fields, found {}", fields.len())));
            }
            Ok((fields[0].to_string(), fields[1].to_string()))
        };
        let num = |lineno: usize, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| err(lineno, format!("`{s}`: {e}")))
        };

        let (lineno, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let (m, cap) = pair(lineno, header)?;
        let m: usize = m
            .parse()
            .map_err(|e| err(lineno, format!("item count `{m}`: {e}")))?;
        let capacity = num(lineno, &cap)?;

        let mut values = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for _ in 0..m {
            let (lineno, l) = lines
                .next()
                .ok_or_else(|| err(0, format!("expected {m} items, found {}", values.len())))?;
            let (v, w) = pair(lineno, l)?;
            values.push(num(lineno, &v)?);
            weights.push(num(lineno, &w)?);
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(err(lineno, format!("trailing data after {m} items")));
        }
        KnapsackInstance::new(values, weights, capacity)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        KnapsackInstance::parse(&text, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.items(), self.capacity);
        for (v, w) in self.values.iter().zip(&self.weights) {
            s.push_str(&format!("{v} {w}\n"));
        }
        s
    }
}

/// All-integer problem over `{0,1}ᵐ`. Infeasible selections are penalized
/// by their excess weight, so every feasible point (`f ≤ 0`) beats every
/// infeasible one (`f > 0`).
pub fn knapsack(instance: KnapsackInstance) -> Result<Problem> {
    instance.validate()?;
    let m = instance.items();
    Problem::from_fn("knapsack", Bounds::uniform(m, 0.0, 1.0)?, m, move |x| {
        let mut value = 0.0;
        let mut weight = 0.0;
        for ((xi, v), w) in x.iter().zip(&instance.values).zip(&instance.weights) {
            value += xi * v;
            weight += xi * w;
        }
        if weight <= instance.capacity {
            -value
        } else {
            weight - instance.capacity
        }
    })
}

/// Registered problem names with their parameter signatures.
pub const REGISTRY: &[(&str, &str)] = &[
    ("rastrigin", "dim >= 1"),
    ("rosenbrock", "dim >= 2"),
    ("schwefel", "dim >= 1"),
    ("griewank", "dim >= 1"),
    ("branin", "(none)"),
    ("himmelblau", "(none)"),
    ("knapsack", "file | values, weights, capacity"),
];

/// Serializable problem recipe, tagged by `name`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    Rastrigin { dim: usize },
    Rosenbrock { dim: usize },
    Schwefel { dim: usize },
    Griewank { dim: usize },
    Branin,
    Himmelblau,
    /// Either `file` or the inline `values`, `weights` and `capacity`.
    Knapsack {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<std::path::PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        values: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        capacity: Option<f64>,
    },
}

impl ProblemSpec {
    /// Builds the problem; a relative knapsack `file` is resolved against `base`.
    pub fn build(&self, base: Option<&Path>) -> Result<Problem> {
        match self {
            ProblemSpec::Rastrigin { dim } => rastrigin(*dim),
            ProblemSpec::Rosenbrock { dim } => rosenbrock(*dim),
            ProblemSpec::Schwefel { dim } => schwefel(*dim),
            ProblemSpec::Griewank { dim } => griewank(*dim),
            ProblemSpec::Branin => branin(),
            ProblemSpec::Himmelblau => himmelblau(),
            ProblemSpec::Knapsack {
                file,
                values,
                weights,
                capacity,
            } => {
                let instance = match (file, values, weights, capacity) {
                    (Some(file), None, None, None) => {
                        let path = match base {
                            Some(dir) if file.is_relative() => dir.join(file),
                            _ => file.clone(),
                        };
                        KnapsackInstance::load(&path)?
                    }
                    (None, Some(v), Some(w), Some(c)) => KnapsackInstance::new(v.clone(), w.clone(), *c)?,
                    _ => {
                        return Err(Error::param(
                            "knapsack",
                            "give either `file` or all of `values`, `weights`, `capacity`",
                        ))
                    }
                };
                knapsack(instance)
            }
        }
    }
}
