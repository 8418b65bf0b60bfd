//! Islands and the archipelago that evolves them concurrently.
//!
//! [`Archipelago::evolve`] moves every island onto its own thread and
//! returns immediately; [`Archipelago::join`] waits for the threads and
//! takes the islands back. Each island runs its cycles independently:
//!
//! 1. drain its mailbox and merge the immigrants,
//! 2. run its algorithm once,
//! 3. every `frequency`-th iteration, post its emigrants to each out-neighbour.
//!
//! In lockstep mode all islands pass a barrier after step 1 and after step 3,
//! which makes a whole run reproducible from its seeds.

use std::collections::VecDeque;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Barrier, Condvar, Mutex};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::migration::{
    apply_immigrants, select_emigrants, Batch, Mailbox, MigrationKind, MigrationParams, MigrationRecord,
    ReplacementPolicy, SelectionPolicy,
};
use crate::population::{Individual, Population};
use crate::problem::Problem;
use crate::rng::{mix_seed, Rng};
use crate::topology::{Topology, TopologySpec};

/// Generator stream used for an island's algorithm.
pub const ALGORITHM_STREAM: u64 = 1;
/// Generator stream used for an island's migration decisions.
pub const MIGRATION_STREAM: u64 = 2;

/// A population, the algorithm that evolves it, and its migration settings.
///
/// The population is drawn from `Population::random(problem, size, seed)`;
/// the algorithm and migration generators are `Rng::stream(seed, 1)` and
/// `Rng::stream(seed, 2)`. Each island counts its own evaluations.
#[derive(Clone, Debug)]
pub struct Island {
    problem: Problem,
    algorithm: Algorithm,
    population: Population,
    migration: MigrationParams,
    selection: SelectionPolicy,
    replacement: ReplacementPolicy,
    seed: u64,
    rng: Rng,
    migration_rng: Rng,
    index: Option<usize>,
    iterations: u64,
    busy: Duration,
}

impl Island {
    pub fn new(problem: &Problem, algorithm: Algorithm, size: usize, seed: u64) -> Result<Self> {
        let problem = problem.with_fresh_counter();
        let population = Population::random(&problem, size, seed)?;
        Island::assemble(problem, algorithm, population, seed)
    }

    /// Wraps an existing population; its problem's counter becomes the island's.
    pub fn from_population(population: Population, algorithm: Algorithm, seed: u64) -> Result<Self> {
        let problem = population.problem().clone();
        Island::assemble(problem, algorithm, population, seed)
    }

    fn assemble(problem: Problem, algorithm: Algorithm, population: Population, seed: u64) -> Result<Self> {
        algorithm.validate()?;
        Ok(Island {
            problem,
            algorithm,
            population,
            migration: MigrationParams::default(),
            selection: SelectionPolicy::default(),
            replacement: ReplacementPolicy::default(),
            seed,
            rng: Rng::stream(seed, ALGORITHM_STREAM),
            migration_rng: Rng::stream(seed, MIGRATION_STREAM),
            index: None,
            iterations: 0,
            busy: Duration::ZERO,
        })
    }

    pub fn with_migration(mut self, migration: MigrationParams) -> Result<Self> {
        migration.validate()?;
        self.migration = migration;
        Ok(self)
    }

    pub fn with_selection(mut self, selection: SelectionPolicy) -> Self {
        self.selection = selection;
        self
    }

    pub fn with_replacement(mut self, replacement: ReplacementPolicy) -> Self {
        self.replacement = replacement;
        self
    }

    pub fn with_acceptance(self, probability: f64) -> Result<Self> {
        let migration = MigrationParams {
            acceptance_probability: probability,
            ..self.migration.clone()
        };
        self.with_migration(migration)
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn algorithm(&self) -> &Algorithm {
        &self.algorithm
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn migration(&self) -> &MigrationParams {
        &self.migration
    }

    pub fn selection(&self) -> SelectionPolicy {
        self.selection
    }

    pub fn replacement(&self) -> ReplacementPolicy {
        self.replacement
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Position in its archipelago, once inserted.
    pub fn index(&self) -> Option<usize> {
        self.index
    }

    /// Cycles completed since construction or the last reset.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn evaluations(&self) -> u64 {
        self.problem.evaluations()
    }

    /// Wall time spent in cycles since construction or the last reset.
    pub fn busy_time(&self) -> Duration {
        self.busy
    }

    pub fn champion(&self) -> Result<&Individual> {
        self.population.champion()
    }

    /// Runs the algorithm once, as one cycle would without migration.
    pub fn evolve_once(&mut self) -> Result<()> {
        let start = Instant::now();
        let r = self.algorithm.evolve(&mut self.population, &mut self.rng);
        self.iterations += 1;
        self.busy += start.elapsed();
        r
    }

    /// Re-draws the population and both generators from `seed`.
    pub fn reset(&mut self, seed: u64) -> Result<()> {
        self.population.reinitialize(seed)?;
        self.seed = seed;
        self.rng = Rng::stream(seed, ALGORITHM_STREAM);
        self.migration_rng = Rng::stream(seed, MIGRATION_STREAM);
        self.iterations = 0;
        self.busy = Duration::ZERO;
        Ok(())
    }

    fn champion_f(&self) -> Option<f64> {
        self.population.champion().ok().map(Individual::f)
    }
}

/// One line of the run log, written after every island cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Archipelago-wide event counter shared with the migration log.
    pub tick: u64,
    pub island: usize,
    pub iteration: u64,
    pub champion_f: Option<f64>,
    pub evaluations: u64,
}

/// Progress of one island, readable at any time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IslandSnapshot {
    pub island: usize,
    pub champion_f: Option<f64>,
    pub evaluations: u64,
    pub iterations: u64,
}

#[derive(Debug)]
struct Progress {
    champion_bits: AtomicU64,
    iterations: AtomicU64,
    evaluations: Problem,
}

impl Progress {
    fn new(island: &Island) -> Self {
        let p = Progress {
            champion_bits: AtomicU64::new(0),
            iterations: AtomicU64::new(0),
            evaluations: island.problem.clone(),
        };
        p.publish(island);
        p
    }

    fn publish(&self, island: &Island) {
        let bits = island.champion_f().unwrap_or(f64::NAN).to_bits();
        self.champion_bits.store(bits, Ordering::Release);
        self.iterations.store(island.iterations, Ordering::Release);
    }

    fn read(&self, index: usize) -> IslandSnapshot {
        let f = f64::from_bits(self.champion_bits.load(Ordering::Acquire));
        IslandSnapshot {
            island: index,
            champion_f: (!f.is_nan()).then_some(f),
            evaluations: self.evaluations.evaluations(),
            iterations: self.iterations.load(Ordering::Acquire),
        }
    }
}

#[derive(Debug, Default)]
struct Logs {
    tick: AtomicU64,
    runs: Mutex<Vec<RunRecord>>,
    migrations: Mutex<Vec<MigrationRecord>>,
}

impl Logs {
    fn next_tick(&self) -> u64 {
        self.tick.fetch_add(1, Ordering::Relaxed)
    }

    fn migration(&self, kind: MigrationKind, src: usize, dst: usize, batch: &Batch, accepted: bool) {
        let record = MigrationRecord {
            tick: self.next_tick(),
            kind,
            src,
            dst,
            batch: batch.origin_iteration,
            fitnesses: batch.individuals.iter().map(Individual::f).collect(),
            accepted,
        };
        self.migrations.lock().expect("log lock").push(record);
    }
}

/// FIFO counting semaphore: waiters are served in arrival order.
#[derive(Debug)]
struct FairSemaphore {
    state: Mutex<(usize, VecDeque<u64>, u64)>,
    ready: Condvar,
}

impl FairSemaphore {
    fn new(permits: usize) -> Self {
        FairSemaphore {
            state: Mutex::new((permits, VecDeque::new(), 0)),
            ready: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut s = self.state.lock().expect("semaphore lock");
        let ticket = s.2;
        s.2 += 1;
        s.1.push_back(ticket);
        while !(s.0 > 0 && s.1.front() == Some(&ticket)) {
            s = self.ready.wait(s).expect("semaphore lock");
        }
        s.0 -= 1;
        s.1.pop_front();
        self.ready.notify_all();
        Permit(self)
    }
}

struct Permit<'a>(&'a FairSemaphore);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut s = self.0.state.lock().expect("semaphore lock");
        s.0 += 1;
        self.0.ready.notify_all();
    }
}

/// Per-evolve context shared by the island threads.
struct Run {
    mailboxes: Arc<Vec<Mailbox>>,
    progress: Arc<Vec<Progress>>,
    logs: Arc<Logs>,
    topology: Topology,
    barrier: Option<Barrier>,
    slots: Option<FairSemaphore>,
    failed: AtomicBool,
}

/// Islands connected by a migration topology.
#[derive(Debug)]
pub struct Archipelago {
    topology: TopologySpec,
    islands: Vec<Island>,
    mailboxes: Arc<Vec<Mailbox>>,
    progress: Arc<Vec<Progress>>,
    logs: Arc<Logs>,
    lockstep: bool,
    max_concurrency: Option<usize>,
    running: Option<Vec<JoinHandle<(Island, Result<()>)>>>,
    wall: Duration,
    started: Option<Instant>,
}

impl Archipelago {
    pub fn new(topology: TopologySpec) -> Self {
        Archipelago {
            topology,
            islands: Vec::new(),
            mailboxes: Arc::new(Vec::new()),
            progress: Arc::new(Vec::new()),
            logs: Arc::new(Logs::default()),
            lockstep: false,
            max_concurrency: None,
            running: None,
            wall: Duration::ZERO,
            started: None,
        }
    }

    /// Barrier-synchronized cycles: whole runs become reproducible.
    pub fn with_lockstep(mut self, lockstep: bool) -> Self {
        self.lockstep = lockstep;
        self
    }

    /// Caps how many islands run their algorithm at the same time.
    /// By default every island runs on its own thread without a cap.
    pub fn with_max_concurrency(mut self, limit: Option<usize>) -> Result<Self> {
        if limit == Some(0) {
            return Err(Error::param("max_concurrency", "must be at least 1"));
        }
        self.max_concurrency = limit;
        Ok(self)
    }

    pub fn lockstep(&self) -> bool {
        self.lockstep
    }

    pub fn topology_spec(&self) -> &TopologySpec {
        &self.topology
    }

    /// The topology over the current islands.
    pub fn topology(&self) -> Result<Topology> {
        self.topology.build(self.len())
    }

    pub fn len(&self) -> usize {
        self.progress.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True between `evolve` and `join`.
    pub fn is_evolving(&self) -> bool {
        self.running.is_some()
    }

    fn idle(&self) -> Result<()> {
        if self.is_evolving() {
            Err(Error::Evolving)
        } else {
            Ok(())
        }
    }

    pub fn islands(&self) -> Result<&[Island]> {
        self.idle()?;
        Ok(&self.islands)
    }

    pub fn island(&self, index: usize) -> Result<&Island> {
        self.idle()?;
        self.islands
            .get(index)
            .ok_or_else(|| Error::param("island", format!("index {index} out of range")))
    }

    /// Appends `island`, returning its index.
    pub fn push_back(&mut self, mut island: Island) -> Result<usize> {
        self.idle()?;
        if let Some(first) = self.islands.first() {
            if !first.problem.same_space(&island.problem) {
                return Err(Error::ProblemMismatch(format!(
                    "island problem `{}` (dimension {}) does not match `{}` (dimension {})",
                    island.problem.name(),
                    island.problem.dim(),
                    first.problem.name(),
                    first.problem.dim()
                )));
            }
        }
        let index = self.islands.len();
        island.index = Some(index);
        Arc::get_mut(&mut self.mailboxes)
            .expect("idle archipelago owns its mailboxes")
            .push(Mailbox::new());
        Arc::get_mut(&mut self.progress)
            .expect("idle archipelago owns its progress")
            .push(Progress::new(&island));
        self.islands.push(island);
        Ok(index)
    }

    /// Starts `iterations` cycles on every island in the background.
    pub fn evolve(&mut self, iterations: u64) -> Result<()> {
        self.idle()?;
        if self.islands.is_empty() {
            return Err(Error::NoIslands);
        }
        let n = self.islands.len();
        let topology = self.topology.build(n)?;
        let run = Arc::new(Run {
            mailboxes: Arc::clone(&self.mailboxes),
            progress: Arc::clone(&self.progress),
            logs: Arc::clone(&self.logs),
            topology,
            barrier: self.lockstep.then(|| Barrier::new(n)),
            slots: self.max_concurrency.map(FairSemaphore::new),
            failed: AtomicBool::new(false),
        });
        self.started = Some(Instant::now());
        let mut handles = Vec::with_capacity(n);
        for (index, island) in self.islands.drain(..).enumerate() {
            let run = Arc::clone(&run);
            let handle = std::thread::Builder::new()
                .name(format!("island-{index}"))
                .spawn(move || run_island(island, index, iterations, &run))
                .map_err(|e| Error::Io(format!("cannot spawn island thread: {e}")))?;
            handles.push(handle);
        }
        self.running = Some(handles);
        Ok(())
    }

    /// Waits for the background cycles to finish. Returns the first island
    /// error, if any; the islands are back in place either way.
    pub fn join(&mut self) -> Result<()> {
        let Some(handles) = self.running.take() else {
            return Ok(());
        };
        let mut first_error = None;
        for handle in handles {
            match handle.join() {
                Ok((island, result)) => {
                    if let Err(e) = result {
                        first_error.get_or_insert(e);
                    }
                    self.islands.push(island);
                }
                Err(_) => unreachable!("island threads catch their own panics"),
            }
        }
        if let Some(start) = self.started.take() {
            self.wall += start.elapsed();
        }
        first_error.map_or(Ok(()), Err)
    }

    /// The best champion over all islands, lowest island index on ties.
    pub fn best(&self) -> Result<Individual> {
        self.idle()?;
        self.best_with_island().map(|(_, ind)| ind)
    }

    /// Like [`Archipelago::best`], also returning the island it came from.
    pub fn best_with_island(&self) -> Result<(usize, Individual)> {
        self.idle()?;
        let mut best: Option<(usize, &Individual)> = None;
        for (i, island) in self.islands.iter().enumerate() {
            if let Ok(c) = island.champion() {
                if best.map_or(true, |(_, b)| c.f() < b.f()) {
                    best = Some((i, c));
                }
            }
        }
        best.map(|(i, c)| (i, c.clone())).ok_or(Error::EmptyPopulation)
    }

    /// Re-draws every population from `mix_seed(seed, i)` and clears the mailboxes.
    pub fn reset(&mut self, seed: u64) -> Result<()> {
        self.idle()?;
        for (i, island) in self.islands.iter_mut().enumerate() {
            island.reset(mix_seed(seed, i as u64))?;
            self.progress[i].publish(island);
        }
        for (dst, mailbox) in self.mailboxes.iter().enumerate() {
            for (src, batch) in mailbox.drain() {
                self.logs.migration(MigrationKind::Cleared, src, dst, &batch, false);
            }
        }
        self.wall = Duration::ZERO;
        Ok(())
    }

    /// Per-island progress; never blocks the islands.
    pub fn snapshot(&self) -> Vec<IslandSnapshot> {
        self.progress.iter().enumerate().map(|(i, p)| p.read(i)).collect()
    }

    /// Batches waiting in island `index`'s mailbox.
    pub fn pending_migrants(&self, index: usize) -> usize {
        self.mailboxes.get(index).map_or(0, Mailbox::pending)
    }

    /// Evaluations over all islands.
    pub fn evaluations(&self) -> u64 {
        self.snapshot().iter().map(|s| s.evaluations).sum()
    }

    /// Wall time spent between `evolve` and `join` since the last reset.
    pub fn wall_time(&self) -> Duration {
        self.wall
    }

    pub fn run_log(&self) -> Vec<RunRecord> {
        self.logs.runs.lock().expect("log lock").clone()
    }

    pub fn migration_log(&self) -> Vec<MigrationRecord> {
        self.logs.migrations.lock().expect("log lock").clone()
    }

    pub fn clear_logs(&self) {
        self.logs.runs.lock().expect("log lock").clear();
        self.logs.migrations.lock().expect("log lock").clear();
    }
}

impl Drop for Archipelago {
    fn drop(&mut self) {
        let _ = self.join();
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Runs `f`, turning a panic into an error.
fn guarded(f: impl FnOnce() -> Result<()>) -> Result<()> {
    panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| Err(Error::IslandPanicked(panic_message(p))))
}

fn run_island(mut island: Island, index: usize, iterations: u64, run: &Run) -> (Island, Result<()>) {
    let neighbours = run.topology.neighbors_out(index).expect("index within topology");
    let mut result = Ok(());
    for _ in 0..iterations {
        // after a failure in lockstep mode, keep meeting the barriers
        let healthy = result.is_ok() && !(run.barrier.is_some() && run.failed.load(Ordering::Acquire));
        if healthy {
            result = guarded(|| receive(&mut island, index, run));
        }
        if let Some(b) = &run.barrier {
            b.wait();
        }
        let healthy = result.is_ok() && !(run.barrier.is_some() && run.failed.load(Ordering::Acquire));
        if healthy {
            result = guarded(|| cycle(&mut island, index, &neighbours, run));
        }
        if result.is_err() {
            run.failed.store(true, Ordering::Release);
        }
        match &run.barrier {
            Some(b) => {
                b.wait();
            }
            None if result.is_err() => break,
            None => {}
        }
    }
    (island, result)
}

fn receive(island: &mut Island, index: usize, run: &Run) -> Result<()> {
    for (src, batch) in run.mailboxes[index].drain() {
        let accepted = apply_immigrants(
            &mut island.population,
            &batch.individuals,
            island.replacement,
            island.migration.acceptance_probability,
            &mut island.migration_rng,
        )?;
        run.logs.migration(MigrationKind::Delivered, src, index, &batch, accepted);
    }
    run.progress[index].publish(island);
    Ok(())
}

fn cycle(island: &mut Island, index: usize, neighbours: &[usize], run: &Run) -> Result<()> {
    {
        let _permit = run.slots.as_ref().map(FairSemaphore::acquire);
        island.evolve_once()?;
    }
    if island.iterations % island.migration.frequency as u64 == 0 && !neighbours.is_empty() {
        let emigrants = select_emigrants(&island.population, island.selection, island.migration.rate);
        if !emigrants.is_empty() {
            for &dst in neighbours {
                let batch = Batch {
                    origin_iteration: island.iterations,
                    individuals: emigrants.clone(),
                };
                run.logs.migration(MigrationKind::Posted, index, dst, &batch, false);
                if let Some(old) = run.mailboxes[dst].post(index, batch) {
                    run.logs.migration(MigrationKind::Superseded, index, dst, &old, false);
                }
            }
        }
    }
    run.progress[index].publish(island);
    let record = RunRecord {
        tick: run.logs.next_tick(),
        island: index,
        iteration: island.iterations,
        champion_f: island.champion_f(),
        evaluations: island.evaluations(),
    };
    run.logs.runs.lock().expect("log lock").push(record);
    Ok(())
}

fn one() -> usize {
    1
}

/// Blueprint for a group of identical islands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IslandSpec {
    pub algorithm: Algorithm,
    pub size: usize,
    /// Number of islands built from this entry.
    #[serde(default = "one")]
    pub count: usize,
    #[serde(default)]
    pub migration: MigrationParams,
    #[serde(default)]
    pub selection: SelectionPolicy,
    #[serde(default)]
    pub replacement: ReplacementPolicy,
}

impl IslandSpec {
    pub fn new(algorithm: Algorithm, size: usize) -> Self {
        IslandSpec {
            algorithm,
            size,
            count: 1,
            migration: MigrationParams::default(),
            selection: SelectionPolicy::default(),
            replacement: ReplacementPolicy::default(),
        }
    }

    pub fn times(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_replacement(mut self, replacement: ReplacementPolicy) -> Self {
        self.replacement = replacement;
        self
    }

    pub fn with_migration(mut self, migration: MigrationParams) -> Self {
        self.migration = migration;
        self
    }

    pub fn build(&self, problem: &Problem, seed: u64) -> Result<Island> {
        Ok(Island::new(problem, self.algorithm.clone(), self.size, seed)?
            .with_migration(self.migration.clone())?
            .with_selection(self.selection)
            .with_replacement(self.replacement))
    }
}

/// Blueprint for a whole archipelago, independent of the problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchipelagoSpec {
    pub topology: TopologySpec,
    pub islands: Vec<IslandSpec>,
    #[serde(default)]
    pub lockstep: bool,
    #[serde(default)]
    pub max_concurrency: Option<usize>,
}

impl ArchipelagoSpec {
    pub fn new(topology: TopologySpec, islands: Vec<IslandSpec>) -> Self {
        ArchipelagoSpec {
            topology,
            islands,
            lockstep: false,
            max_concurrency: None,
        }
    }

    pub fn island_count(&self) -> usize {
        self.islands.iter().map(|s| s.count).sum()
    }

    /// Checks parameters without evaluating anything.
    pub fn validate(&self) -> Result<()> {
        if self.island_count() == 0 {
            return Err(Error::NoIslands);
        }
        for spec in &self.islands {
            spec.algorithm.validate()?;
            spec.migration.validate()?;
            let need = spec.algorithm.min_population();
            if spec.size < need {
                return Err(Error::PopulationTooSmall {
                    algorithm: spec.algorithm.name(),
                    required: need,
                    actual: spec.size,
                });
            }
        }
        if self.max_concurrency == Some(0) {
            return Err(Error::param("max_concurrency", "must be at least 1"));
        }
        self.topology.build(self.island_count()).map(drop)
    }

    /// Builds the archipelago for `problem`; island `i` is seeded with `mix_seed(seed, i)`.
    pub fn build(&self, problem: &Problem, seed: u64) -> Result<Archipelago> {
        self.validate()?;
        let mut a = Archipelago::new(self.topology.clone())
            .with_lockstep(self.lockstep)
            .with_max_concurrency(self.max_concurrency)?;
        let mut i = 0u64;
        for spec in &self.islands {
            for _ in 0..spec.count {
                a.push_back(spec.build(problem, mix_seed(seed, i))?)?;
                i += 1;
            }
        }
        Ok(a)
    }
}
