//! Emigrant selection, immigrant replacement, and the per-island mailboxes
//! migrants travel through.
//!
//! Migration is push based: an island posts a copy of its emigrants to the
//! mailbox of every out-neighbour, and drains its own mailbox at the start
//! of its next iteration. A mailbox keeps only the latest batch from each
//! source.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::{Individual, Population};
use crate::rng::Rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MigrationParams {
    /// Individuals selected per migration event.
    #[serde(default = "MigrationParams::default_rate")]
    pub rate: usize,
    /// Emigrate after every `frequency`-th iteration.
    #[serde(default = "MigrationParams::default_frequency")]
    pub frequency: usize,
    /// Probability that an incoming batch is considered at all.
    #[serde(default = "MigrationParams::default_acceptance")]
    pub acceptance_probability: f64,
}

impl MigrationParams {
    fn default_rate() -> usize {
        1
    }
    fn default_frequency() -> usize {
        1
    }
    fn default_acceptance() -> f64 {
        1.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.frequency == 0 {
            return Err(Error::param("frequency", "must be at least 1"));
        }
        let p = self.acceptance_probability;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("acceptance_probability", format!("{p} not in [0, 1]")));
        }
        Ok(())
    }
}

impl Default for MigrationParams {
    fn default() -> Self {
        MigrationParams {
            rate: 1,
            frequency: 1,
            acceptance_probability: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// The `rate` lowest-f individuals.
    #[default]
    Best,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplacementPolicy {
    /// An immigrant replaces the current worst only if strictly better.
    #[default]
    ConditionalWorst,
    /// Every immigrant replaces the current worst.
    UnconditionalWorst,
}

/// Copies of the `min(rate, len)` best individuals, best first (stable on ties).
pub fn select_emigrants(pop: &Population, policy: SelectionPolicy, rate: usize) -> Vec<Individual> {
    match policy {
        SelectionPolicy::Best => {
            let mut order: Vec<usize> = (0..pop.len()).collect();
            order.sort_by(|&a, &b| {
                pop.individuals()[a]
                    .f()
                    .total_cmp(&pop.individuals()[b].f())
            });
            order
                .into_iter()
                .take(rate)
                .map(|i| pop.individuals()[i].clone())
                .collect()
        }
    }
}

/// Merges `incoming` into `pop`. One acceptance draw decides for the whole
/// batch (no draw is made when `accept_prob` is 1 or the batch is empty).
/// Returns whether the batch was accepted.
pub fn apply_immigrants(
    pop: &mut Population,
    incoming: &[Individual],
    policy: ReplacementPolicy,
    accept_prob: f64,
    rng: &mut Rng,
) -> Result<bool> {
    for ind in incoming {
        pop.problem().check(ind.x()).map_err(|e| {
            Error::ProblemMismatch(format!("immigrant is not a point of this island's problem: {e}"))
        })?;
    }
    if incoming.is_empty() || pop.is_empty() {
        return Ok(false);
    }
    let accepted = accept_prob >= 1.0 || rng.chance(accept_prob);
    if !accepted {
        return Ok(false);
    }
    for ind in incoming {
        let worst = pop.worst_index().expect("non-empty");
        let replace = match policy {
            ReplacementPolicy::ConditionalWorst => ind.f() < pop.individuals()[worst].f(),
            ReplacementPolicy::UnconditionalWorst => true,
        };
        if replace {
            pop.set(worst, ind.clone());
        }
    }
    Ok(true)
}

/// A batch of migrants tagged with the source iteration that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    pub origin_iteration: u64,
    pub individuals: Vec<Individual>,
}

/// One island's inbox: the latest batch from each source.
#[derive(Debug, Default)]
pub struct Mailbox {
    inbox: Mutex<BTreeMap<usize, Batch>>,
}

impl Mailbox {
    pub fn new() -> Self {
        Mailbox::default()
    }

    /// Stores `batch` as the pending batch from `src`, returning the batch it replaced.
    pub fn post(&self, src: usize, batch: Batch) -> Option<Batch> {
        self.inbox.lock().expect("mailbox lock").insert(src, batch)
    }

    /// Removes and returns every pending batch, in ascending source order.
    pub fn drain(&self) -> Vec<(usize, Batch)> {
        std::mem::take(&mut *self.inbox.lock().expect("mailbox lock"))
            .into_iter()
            .collect()
    }

    pub fn pending(&self) -> usize {
        self.inbox.lock().expect("mailbox lock").len()
    }

    /// Pending batches without removing them.
    pub fn peek(&self) -> Vec<(usize, Batch)> {
        self.inbox
            .lock()
            .expect("mailbox lock")
            .iter()
            .map(|(s, b)| (*s, b.clone()))
            .collect()
    }

    pub fn clear(&self) {
        self.inbox.lock().expect("mailbox lock").clear();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MigrationKind {
    /// Batch placed in the destination mailbox.
    Posted,
    /// Pending batch overwritten by a newer one from the same source.
    Superseded,
    /// Batch drained by the destination and handed to its replacement policy.
    Delivered,
    /// Batch discarded by an archipelago reset.
    Cleared,
}

/// One line of the migration log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MigrationRecord {
    /// Archipelago-wide event counter.
    pub tick: u64,
    pub kind: MigrationKind,
    pub src: usize,
    pub dst: usize,
    /// Iteration of `src` that produced the batch; identifies the batch.
    pub batch: u64,
    pub fitnesses: Vec<f64>,
    /// Only meaningful for `delivered` records.
    pub accepted: bool,
}
