//! Multistart campaigns and box pruning.
//!
//! A campaign resets an archipelago, evolves it, and records its best
//! individual, `runs` times over. Pruning then shrinks the search box to the
//! bounding box of the best recorded champions, padded by a fraction of the
//! current range and clipped to the current box, and the next campaign runs
//! inside it.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::archipelago::{Archipelago, ArchipelagoSpec};
use crate::error::{Error, Result};
use crate::population::Individual;
use crate::problem::{Bounds, Problem};
use crate::rng::mix_seed;

pub const DEFAULT_KEEP_FRACTION: f64 = 0.1;
pub const DEFAULT_PADDING: f64 = 0.03;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub run: usize,
    pub f: f64,
    pub x: Vec<f64>,
}

/// Champions collected from repeated runs on one problem.
#[derive(Clone, Debug)]
pub struct ChampionArchive {
    problem: Problem,
    entries: Vec<ArchiveEntry>,
}

impl ChampionArchive {
    pub fn new(problem: &Problem) -> Self {
        ChampionArchive {
            problem: problem.clone(),
            entries: Vec::new(),
        }
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records `champion` for `run`; it must be a point of the archive's problem.
    pub fn push(&mut self, run: usize, champion: &Individual) -> Result<()> {
        self.problem.check(champion.x())?;
        self.entries.push(ArchiveEntry {
            run,
            f: champion.f(),
            x: champion.x().to_vec(),
        });
        Ok(())
    }

    /// Lowest-f entry, earliest on ties.
    pub fn best(&self) -> Option<&ArchiveEntry> {
        self.entries
            .iter()
            .reduce(|best, e| if e.f < best.f { e } else { best })
    }

    pub fn best_individual(&self) -> Option<Individual> {
        self.best().map(|e| Individual::cached(e.x.clone(), e.f))
    }

    pub fn fitnesses(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.f).collect()
    }

    /// Keeps only the entries for which `keep` holds, e.g. one cluster.
    pub fn filtered(&self, keep: impl Fn(&ArchiveEntry) -> bool) -> ChampionArchive {
        ChampionArchive {
            problem: self.problem.clone(),
            entries: self.entries.iter().filter(|e| keep(e)).cloned().collect(),
        }
    }

    /// One line per entry: `run fitness x0 ... x(n-1)`, tab separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            write!(out, "{}\t{}", e.run, e.f).expect("write to string");
            for v in &e.x {
                write!(out, "\t{v}").expect("write to string");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`ChampionArchive::to_tsv`] (any
    /// whitespace separates fields). Each vector is re-evaluated and must
    /// reproduce its recorded fitness.
    pub fn from_tsv(problem: &Problem, text: &str, origin: &str) -> Result<Self> {
        let mut archive = ChampionArchive::new(problem);
        for (k, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: origin.to_string(),
                line: k + 1,
                message,
            };
            if fields.len() != problem.dim() + 2 {
                return Err(err(format!(
                    "expected {} fields, found {}",
                    problem.dim() + 2,
                    fields.len()
                )));
            }
            let run = fields[0]
                .parse::<usize>()
                .map_err(|e| err(format!("run index `{}`: {e}", fields[0])))?;
            let nums = fields[1..]
                .iter()
                .map(|s| s.parse::<f64>().map_err(|e| err(format!("number `{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let (f, x) = (nums[0], nums[1..].to_vec());
            let ind = Individual::evaluate(problem, x).map_err(|e| err(e.to_string()))?;
            if ind.f() != f {
                return Err(err(format!("recorded fitness {f} but the vector evaluates to {}", ind.f())));
            }
            archive.push(run, &ind)?;
        }
        Ok(archive)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_tsv())?)
    }

    pub fn load(problem: &Problem, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        ChampionArchive::from_tsv(problem, &text, &path.display().to_string())
    }
}

/// Seed used for run `k` of a campaign seeded with `seed`.
pub fn run_seed(seed: u64, k: usize) -> u64 {
    mix_seed(seed, k as u64)
}

/// `runs` times: reset the archipelago with `run_seed(seed, k)`, evolve it
/// for `iterations`, join, and record its best individual.
pub fn multistart_campaign(a: &mut Archipelago, runs: usize, iterations: u64, seed: u64) -> Result<ChampionArchive> {
    let problem = a.islands()?.first().ok_or(Error::NoIslands)?.problem().clone();
    let mut archive = ChampionArchive::new(&problem);
    for k in 0..runs {
        a.reset(run_seed(seed, k))?;
        a.evolve(iterations)?;
        a.join()?;
        archive.push(k, &a.best()?)?;
    }
    Ok(archive)
}

/// Bounding box of the best `ceil(keep_fraction · len)` entries, widened by
/// `padding` times the width of the archive problem's box and clipped to it.
pub fn prune_bounds(archive: &ChampionArchive, keep_fraction: f64, padding: f64) -> Result<Bounds> {
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(Error::param("keep_fraction", format!("{keep_fraction} not in (0, 1]")));
    }
    if !(padding >= 0.0 && padding.is_finite()) {
        return Err(Error::param("padding", format!("{padding} must be finite and non-negative")));
    }
    if archive.is_empty() {
        return Err(Error::EmptyArchive);
    }
    let keep = ((keep_fraction * archive.len() as f64).ceil() as usize).clamp(1, archive.len());
    let mut order: Vec<&ArchiveEntry> = archive.entries.iter().collect();
    order.sort_by(|a, b| a.f.total_cmp(&b.f));
    let kept = &order[..keep];

    let outer = archive.problem.bounds();
    let n = outer.dim();
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for i in 0..n {
        let lo = kept.iter().map(|e| e.x[i]).fold(f64::INFINITY, f64::min);
        let hi = kept.iter().map(|e| e.x[i]).fold(f64::NEG_INFINITY, f64::max);
        let pad = padding * outer.width(i);
        lower.push((lo - pad).max(outer.lower()[i]));
        upper.push((hi + pad).min(outer.upper()[i]));
    }
    Bounds::new(lower, upper)
}

/// `problem` restricted to `bounds`, which must lie inside its box.
pub fn pruned_problem(problem: &Problem, bounds: Bounds) -> Result<Problem> {
    problem.with_bounds(bounds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruningParams {
    pub cycles: usize,
    pub runs_per_cycle: usize,
    pub iterations: u64,
    #[serde(default = "default_keep_fraction")]
    pub keep_fraction: f64,
    #[serde(default = "default_padding")]
    pub padding: f64,
}

fn default_keep_fraction() -> f64 {
    DEFAULT_KEEP_FRACTION
}

fn default_padding() -> f64 {
    DEFAULT_PADDING
}

impl PruningParams {
    pub fn new(cycles: usize, runs_per_cycle: usize, iterations: u64) -> Self {
        PruningParams {
            cycles,
            runs_per_cycle,
            iterations,
            keep_fraction: DEFAULT_KEEP_FRACTION,
            padding: DEFAULT_PADDING,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PruningOutcome {
    /// Best individual over all cycles; a point of the original problem.
    pub best: Individual,
    /// Bounds produced by each cycle's pruning step, outermost first.
    pub bounds: Vec<Bounds>,
    /// Each cycle's archive.
    pub archives: Vec<ChampionArchive>,
    /// Evaluations spent by the campaigns (construction draws excluded).
    pub evaluations: u64,
}

/// Alternates campaigns and pruning `cycles` times. Cycle `c` rebuilds the
/// archipelago on the current box with `mix_seed(seed, c)` and runs its
/// campaign with the same seed.
pub fn pruning_cycles(
    problem: &Problem,
    spec: &ArchipelagoSpec,
    params: &PruningParams,
    seed: u64,
) -> Result<PruningOutcome> {
    if params.cycles == 0 {
        return Err(Error::param("cycles", "must be at least 1"));
    }
    if params.runs_per_cycle == 0 {
        return Err(Error::param("runs_per_cycle", "must be at least 1"));
    }
    let mut current = problem.clone();
    let mut best: Option<Individual> = None;
    let mut bounds = Vec::with_capacity(params.cycles);
    let mut archives = Vec::with_capacity(params.cycles);
    let mut evaluations = 0;
    for c in 0..params.cycles {
        let cycle_seed = mix_seed(seed, c as u64);
        let mut a = spec.build(&current, cycle_seed)?;
        let construction = a.evaluations();
        let archive = multistart_campaign(&mut a, params.runs_per_cycle, params.iterations, cycle_seed)?;
        evaluations += a.evaluations() - construction;
        let champion = archive.best_individual().ok_or(Error::EmptyArchive)?;
        if best.as_ref().map_or(true, |b| champion.f() < b.f()) {
            best = Some(champion);
        }
        let narrowed = prune_bounds(&archive, params.keep_fraction, params.padding)?;
        current = pruned_problem(&current, narrowed.clone())?;
        bounds.push(narrowed);
        archives.push(archive);
    }
    Ok(PruningOutcome {
        best: best.expect("at least one cycle"),
        bounds,
        archives,
        evaluations,
    })
}
