#![allow(dead_code)]

pub mod analytic;

use std::sync::OnceLock;

use isle::rng::Rng;
use isle::Problem;
use serde_json::Value;

pub type Check = fn() -> Result<(), String>;

/// Fails the enclosing check with a formatted message unless `cond` holds.
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Converts any displayable error into a check failure.
pub fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// One-sided sign-test p-value for `wins` successes out of `n` fair trials.
pub fn sign_test_p(wins: usize, n: usize) -> f64 {
    let mut p = 0.0;
    for k in wins..=n {
        p += binomial(n, k) * 0.5f64.powi(n as i32);
    }
    p
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Independent oracle values, generated by `fixtures/generate.py`.
pub fn fixture() -> &'static Value {
    static F: OnceLock<Value> = OnceLock::new();
    F.get_or_init(|| serde_json::from_str(include_str!("../fixtures/analytic.json")).expect("fixture json"))
}

/// Regression anchors recorded from deterministic runs.
pub fn anchors() -> &'static Value {
    static A: OnceLock<Value> = OnceLock::new();
    A.get_or_init(|| serde_json::from_str(include_str!("../fixtures/anchors.json")).expect("anchor json"))
}

pub fn fx(key: &str) -> f64 {
    fixture()[key].as_f64().unwrap_or_else(|| panic!("fixture key {key}"))
}

pub fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_f64().expect("number"))
        .collect()
}

/// Knapsack instance stored in the fixture, with its brute-force optimum value.
pub fn knapsack_fixture(key: &str) -> (Problem, f64) {
    let k = &fixture()[key];
    let inst = isle::problems::KnapsackInstance::new(
        floats(&k["values"]),
        floats(&k["weights"]),
        k["capacity"].as_f64().expect("capacity"),
    )
    .expect("instance");
    (
        isle::problems::knapsack(inst).expect("knapsack"),
        k["optimum"].as_f64().expect("optimum"),
    )
}

/// Random knapsack instance with `m` items: integer values and weights in
/// 1..=40, capacity half the total weight.
pub fn random_knapsack(rng: &mut Rng, m: usize) -> isle::problems::KnapsackInstance {
    let values: Vec<f64> = (0..m).map(|_| rng.integer_in(1, 40) as f64).collect();
    let weights: Vec<f64> = (0..m).map(|_| rng.integer_in(1, 40) as f64).collect();
    let capacity = (weights.iter().sum::<f64>() / 2.0).floor();
    isle::problems::KnapsackInstance::new(values, weights, capacity).expect("instance")
}

/// Brute-force knapsack optimum by direct enumeration of the item sets.
pub fn knapsack_brute_force(inst: &isle::problems::KnapsackInstance) -> f64 {
    let m = inst.items();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << m) {
        let (mut v, mut w) = (0.0, 0.0);
        for i in 0..m {
            if mask >> i & 1 == 1 {
                v += inst.values[i];
                w += inst.weights[i];
            }
        }
        if w <= inst.capacity && v > best {
            best = v;
        }
    }
    best
}

/// Runs every check, returning the failures as `(name, message)`.
pub fn run_all(checks: &[(&str, Check)]) -> Vec<(String, String)> {
    let mut failures = Vec::new();
    for (name, check) in checks {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        if let Err(e) = outcome {
            failures.push((name.to_string(), e));
        }
    }
    failures
}
