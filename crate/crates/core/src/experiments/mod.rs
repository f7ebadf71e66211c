//! Experiment harness behind the `rauzy-lab` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod converge;
pub mod desk;
pub mod output;
pub mod random;
pub mod selftest;

pub use commands::{cmd_cocycle, cmd_renormalize, cocycle_report, CocycleReport, RenormalizeReport};
pub use config::{Compare, ExperimentConfig, MapSource};
pub use converge::{cmd_converge, converge_report, ConvergeReport, Series};
pub use random::random_genus_one_map;
pub use selftest::{run_selftest, SelftestReport};
