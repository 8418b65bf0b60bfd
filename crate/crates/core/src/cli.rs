//! Experiment runner behind the `isle` binary.
//!
//! An experiment is one JSON document:
//!
//! ```json
//! {
//!   "problem":  {"name": "rastrigin", "dim": 26},
//!   "topology": {"name": "rim"},
//!   "islands":  [{"algorithm": {"name": "de", "generations": 500}, "size": 20, "count": 3}],
//!   "run":      {"seed": 42, "lockstep": false, "mode": {"name": "single", "iterations": 20}},
//!   "output":   "out/rim7"
//! }
//! ```
//!
//! Run modes are `single` (`iterations`), `campaign` (`runs`, `iterations`)
//! and `pruning_cycles` (`cycles`, `runs_per_cycle`, `iterations`,
//! `keep_fraction`, `padding`). A run writes `results.json`, `timing.json`,
//! `run_log.jsonl`, `migration_log.jsonl`, `archive.tsv` and `topology.txt`
//! into the output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::archipelago::{Archipelago, ArchipelagoSpec, IslandSpec, RunRecord};
use crate::error::Error;
use crate::migration::MigrationRecord;
use crate::problem::{Bounds, Problem};
use crate::problems::ProblemSpec;
use crate::strategy::{self, ArchiveEntry, ChampionArchive, PruningParams};
use crate::topology::{Topology, TopologySpec};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ISLE_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "isle-out";

pub const RESULTS_FILE: &str = "results.json";
pub const TIMING_FILE: &str = "timing.json";
pub const RUN_LOG_FILE: &str = "run_log.jsonl";
pub const MIGRATION_LOG_FILE: &str = "migration_log.jsonl";
pub const ARCHIVE_FILE: &str = "archive.tsv";
pub const TOPOLOGY_FILE: &str = "topology.txt";

/// A failure, classified by exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid configuration, or bad command-line input.
    #[error("{0}")]
    Config(String),
    /// Anything that goes wrong once the experiment is running.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub topology: TopologySpec,
    pub islands: Vec<IslandSpec>,
    pub run: RunSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    /// Master seed; island `i` of run `k` derives its seed from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub lockstep: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_concurrency: Option<usize>,
    pub mode: RunMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunMode {
    Single { iterations: u64 },
    Campaign { runs: usize, iterations: u64 },
    PruningCycles(PruningParams),
}

impl RunMode {
    pub fn name(&self) -> &'static str {
        match self {
            RunMode::Single { .. } => "single",
            RunMode::Campaign { .. } => "campaign",
            RunMode::PruningCycles(_) => "pruning_cycles",
        }
    }
}

/// Command-line overrides applied on top of a config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub lockstep: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses a config; errors name the offending key.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::Config(format!("{origin}: {inner}"))
            } else {
                CliError::Config(format!("{origin}: at `{path}`: {inner}"))
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        ExperimentConfig::parse(&text, &path.display().to_string())
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.run.seed = seed;
        }
        if overrides.lockstep {
            self.run.lockstep = true;
        }
        if let Some(out) = &overrides.out {
            self.output = Some(out.clone());
        }
    }

    pub fn archipelago_spec(&self) -> ArchipelagoSpec {
        ArchipelagoSpec {
            topology: self.topology.clone(),
            islands: self.islands.clone(),
            lockstep: self.run.lockstep,
            max_concurrency: self.run.max_concurrency,
        }
    }

    /// Builds the problem and checks every parameter without running anything.
    pub fn validate(&self, base: Option<&Path>) -> Result<Problem, CliError> {
        let config = |key: &str, e: Error| CliError::Config(format!("`{key}`: {e}"));
        let problem = self.problem.build(base).map_err(|e| config("problem", e))?;
        for (i, island) in self.islands.iter().enumerate() {
            let key = format!("islands[{i}]");
            island.algorithm.validate().map_err(|e| config(&format!("{key}.algorithm"), e))?;
            island.migration.validate().map_err(|e| config(&format!("{key}.migration"), e))?;
            let need = island.algorithm.min_population();
            if island.size < need {
                return Err(config(
                    &format!("{key}.size"),
                    Error::PopulationTooSmall {
                        algorithm: island.algorithm.name(),
                        required: need,
                        actual: island.size,
                    },
                ));
            }
        }
        self.archipelago_spec()
            .validate()
            .map_err(|e| config("topology", e))?;
        match &self.run.mode {
            RunMode::Single { .. } => {}
            RunMode::Campaign { runs, .. } if *runs == 0 => {
                return Err(config("run.mode.runs", Error::param("runs", "must be at least 1")))
            }
            RunMode::Campaign { .. } => {}
            RunMode::PruningCycles(p) => {
                if p.cycles == 0 || p.runs_per_cycle == 0 {
                    return Err(config(
                        "run.mode",
                        Error::param("cycles", "cycles and runs_per_cycle must be at least 1"),
                    ));
                }
                if !(p.keep_fraction > 0.0 && p.keep_fraction <= 1.0) {
                    return Err(config("run.mode.keep_fraction", Error::param("keep_fraction", "not in (0, 1]")));
                }
                if !(p.padding >= 0.0 && p.padding.is_finite()) {
                    return Err(config("run.mode.padding", Error::param("padding", "must be non-negative")));
                }
            }
        }
        Ok(problem)
    }

    /// Output directory: the config's, else `$ISLE_OUT_DIR`, else `isle-out`.
    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestRecord {
    pub f: f64,
    pub x: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IslandStats {
    pub island: usize,
    pub algorithm: String,
    pub size: usize,
    pub champion_f: Option<f64>,
    pub evaluations: u64,
    pub iterations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl From<&Bounds> for BoundsRecord {
    fn from(b: &Bounds) -> Self {
        BoundsRecord {
            lower: b.lower().to_vec(),
            upper: b.upper().to_vec(),
        }
    }
}

/// Everything in `results.json`. Deterministic in lockstep mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Results {
    pub problem: String,
    pub dim: usize,
    pub mode: String,
    pub seed: u64,
    pub lockstep: bool,
    pub best: BestRecord,
    /// Islands as they ended the final run.
    pub islands: Vec<IslandStats>,
    pub total_evaluations: u64,
    /// Champion of every run, over all cycles.
    pub archive: Vec<ArchiveEntry>,
    /// Pruned bounds after each cycle (pruning mode only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds_history: Vec<BoundsRecord>,
}

/// Wall-clock measurements, kept apart so results stay reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub island_busy_seconds: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub results: Results,
    pub timing: Timing,
    pub run_log: Vec<RunRecord>,
    pub migration_log: Vec<MigrationRecord>,
    pub archive: ChampionArchive,
    pub topology: Topology,
}

fn island_stats(a: &Archipelago) -> Result<Vec<IslandStats>, CliError> {
    Ok(a.islands()
        .map_err(runtime)?
        .iter()
        .enumerate()
        .map(|(i, island)| IslandStats {
            island: i,
            algorithm: island.algorithm().name().to_string(),
            size: island.population().len(),
            champion_f: island.champion().ok().map(|c| c.f()),
            evaluations: island.evaluations(),
            iterations: island.iterations(),
        })
        .collect())
}

fn busy_seconds(a: &Archipelago) -> Vec<f64> {
    a.islands()
        .map(|is| is.iter().map(|i| i.busy_time().as_secs_f64()).collect())
        .unwrap_or_default()
}

/// Runs a validated experiment.
pub fn execute(config: &ExperimentConfig, base: Option<&Path>) -> Result<RunReport, CliError> {
    let problem = config.validate(base)?;
    let spec = config.archipelago_spec();
    let seed = config.run.seed;
    let start = Instant::now();

    let mut run_log = Vec::new();
    let mut migration_log = Vec::new();
    let mut bounds_history = Vec::new();
    let mut total_evaluations = 0;
    let mut archive = ChampionArchive::new(&problem);
    let final_archipelago;

    match &config.run.mode {
        RunMode::Single { iterations } => {
            let mut a = spec.build(&problem, seed).map_err(runtime)?;
            a.evolve(*iterations).map_err(runtime)?;
            a.join().map_err(runtime)?;
            archive.push(0, &a.best().map_err(runtime)?).map_err(runtime)?;
            final_archipelago = a;
        }
        RunMode::Campaign { runs, iterations } => {
            let mut a = spec.build(&problem, seed).map_err(runtime)?;
            archive = strategy::multistart_campaign(&mut a, *runs, *iterations, seed).map_err(runtime)?;
            final_archipelago = a;
        }
        RunMode::PruningCycles(params) => {
            let mut current = problem.clone();
            let mut last = None;
            let mut tick_offset = 0;
            for c in 0..params.cycles {
                let cycle_seed = crate::rng::mix_seed(seed, c as u64);
                let mut a = spec.build(&current, cycle_seed).map_err(runtime)?;
                let found = strategy::multistart_campaign(&mut a, params.runs_per_cycle, params.iterations, cycle_seed)
                    .map_err(runtime)?;
                for e in found.entries() {
                    let ind = crate::population::Individual::evaluate(&problem, e.x.clone()).map_err(runtime)?;
                    archive.push(c * params.runs_per_cycle + e.run, &ind).map_err(runtime)?;
                }
                let narrowed =
                    strategy::prune_bounds(&found, params.keep_fraction, params.padding).map_err(runtime)?;
                current = strategy::pruned_problem(&current, narrowed.clone()).map_err(runtime)?;
                bounds_history.push(BoundsRecord::from(&narrowed));

                let mut runs = a.run_log();
                let mut migrations = a.migration_log();
                let next = runs.iter().map(|r| r.tick).chain(migrations.iter().map(|r| r.tick)).max();
                runs.iter_mut().for_each(|r| r.tick += tick_offset);
                migrations.iter_mut().for_each(|r| r.tick += tick_offset);
                tick_offset += next.map_or(0, |t| t + 1);
                run_log.extend(runs);
                migration_log.extend(migrations);
                total_evaluations += a.evaluations();
                last = Some(a);
            }
            final_archipelago = last.expect("at least one cycle");
        }
    }

    let a = final_archipelago;
    if !matches!(config.run.mode, RunMode::PruningCycles(_)) {
        run_log = a.run_log();
        migration_log = a.migration_log();
        total_evaluations = a.evaluations();
    }
    let best = archive.best().ok_or_else(|| runtime(Error::EmptyArchive))?;
    let results = Results {
        problem: problem.name().to_string(),
        dim: problem.dim(),
        mode: config.run.mode.name().to_string(),
        seed,
        lockstep: config.run.lockstep,
        best: BestRecord {
            f: best.f,
            x: best.x.clone(),
        },
        islands: island_stats(&a)?,
        total_evaluations,
        archive: archive.entries().to_vec(),
        bounds_history,
    };
    let timing = Timing {
        wall_seconds: start.elapsed().as_secs_f64(),
        island_busy_seconds: busy_seconds(&a),
    };
    let topology = a.topology().map_err(runtime)?;
    Ok(RunReport {
        results,
        timing,
        run_log,
        migration_log,
        archive,
        topology,
    })
}

fn jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

/// Writes every output file of `report` into `dir`.
pub fn write_outputs(report: &RunReport, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
    let results = serde_json::to_string_pretty(&report.results).expect("results serialize") + "\n";
    write(dir, RESULTS_FILE, &results)?;
    let timing = serde_json::to_string_pretty(&report.timing).expect("timing serializes") + "\n";
    write(dir, TIMING_FILE, &timing)?;
    write(dir, RUN_LOG_FILE, &jsonl(&report.run_log))?;
    write(dir, MIGRATION_LOG_FILE, &jsonl(&report.migration_log))?;
    write(dir, ARCHIVE_FILE, &report.archive.to_tsv())?;
    write(dir, TOPOLOGY_FILE, &report.topology.to_edge_list())?;
    Ok(())
}

/// `isle run`: load, validate, execute and write outputs. Returns the output directory.
pub fn run(config_path: &Path, overrides: &Overrides) -> Result<(PathBuf, Results), CliError> {
    let mut config = ExperimentConfig::load(config_path)?;
    config.apply(overrides);
    let base = config_path.parent();
    let report = execute(&config, base)?;
    let dir = config.output_dir();
    write_outputs(&report, &dir)?;
    Ok((dir, report.results))
}

/// `isle run --validate`: the normalized config, re-serialized.
pub fn validate(config_path: &Path, overrides: &Overrides) -> Result<String, CliError> {
    let mut config = ExperimentConfig::load(config_path)?;
    config.apply(overrides);
    config.validate(config_path.parent())?;
    Ok(serde_json::to_string_pretty(&config).expect("config serializes") + "\n")
}

/// `isle list <kind>`: one `name  signature` line per registered item.
pub fn list(kind: &str) -> Result<String, CliError> {
    let registry = match kind {
        "problems" => crate::problems::REGISTRY,
        "algorithms" => crate::algorithms::REGISTRY,
        "topologies" => crate::topology::REGISTRY,
        other => {
            return Err(CliError::Config(format!(
                "unknown kind `{other}`; expected problems, algorithms or topologies"
            )))
        }
    };
    let width = registry.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (name, signature) in registry {
        writeln!(out, "{name:width$}  {signature}").expect("write to string");
    }
    Ok(out)
}

/// `isle export <results> <what>`: writes `<what>.tsv` next to the results
/// and returns its path. `results` is `results.json` or its directory.
pub fn export(results: &Path, what: &str) -> Result<PathBuf, CliError> {
    let dir = if results.is_dir() {
        results.to_path_buf()
    } else {
        results.parent().map(Path::to_path_buf).unwrap_or_default()
    };
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path).map_err(|e| runtime(format!("cannot read {}: {e}", path.display())))
    };
    let table = match what {
        "convergence" => {
            let mut out = String::new();
            for (k, line) in read(RUN_LOG_FILE)?.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let r: RunRecord = serde_json::from_str(line)
                    .map_err(|e| runtime(format!("{RUN_LOG_FILE}:{}: {e}", k + 1)))?;
                let f = r.champion_f.map_or_else(|| "nan".to_string(), |f| f.to_string());
                writeln!(out, "{}\t{}\t{f}", r.tick, r.island).expect("write to string");
            }
            out
        }
        "archive" => read(ARCHIVE_FILE)?,
        "topology" => {
            let text = read(TOPOLOGY_FILE)?;
            Topology::from_edge_list(&text).map_err(runtime)?.to_edge_list()
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown export `{other}`; expected convergence, archive or topology"
            )))
        }
    };
    let path = dir.join(format!("{what}.tsv"));
    fs::write(&path, table).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
