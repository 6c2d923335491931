//! Infrasonic search: a population-based optimiser for box-bounded
//! continuous problems, the classic 23-function benchmark suite, and a
//! seeded multi-run experiment harness.

pub mod error;
pub mod harness;
pub mod isa;
pub mod objective;

pub use error::{Error, Result};
pub use harness::{
    compare_with_baseline, grid_search_rho, random_search_baseline, run_experiment, summarize,
    ExperimentConfig, ExperimentReport, Stats,
};
pub use isa::{run_isa, Agent, IsaParams, RunRecord, SignMode, Swarm, TargetRule};
pub use objective::{Benchmark, Bounds, Defaults, Direction, Objective, ObjectiveSpec, Registry};
