//! Island-model parallel global optimization.

pub mod algorithms;
pub mod archipelago;
pub mod cli;
pub mod error;
pub mod migration;
pub mod population;
pub mod problem;
pub mod problems;
pub mod rng;
pub mod strategy;
pub mod topology;

pub use algorithms::Algorithm;
pub use archipelago::{Archipelago, ArchipelagoSpec, Island, IslandSpec};
pub use error::{Error, Result};
pub use population::{Individual, Population};
pub use problem::{Bounds, Problem};
pub use rng::Rng;
pub use topology::{Topology, TopologySpec};
