//! Binary metaheuristics for the cell pattern of an interdigitated-capacitor
//! RF sensor.
//!
//! A design is a [`Genome`] of free cells that [`expand_genome`] mirrors onto
//! the full grid. Optimizers see the problem only through an [`Evaluator`],
//! which caches costs and enforces the evaluation budget, and report a
//! [`RunRecord`].

pub mod bpso;
pub mod classic;
pub mod diversity;
pub mod error;
pub mod genome;
pub mod grid;
pub mod harness;
pub mod objective;
pub mod objectives;
pub mod record;
pub mod rlbpso;
pub mod rng;

pub use diversity::swarm_diversity;
pub use error::{Error, EvaluatorFailure, Result};
pub use genome::{Genome, IDC_BITS};
pub use grid::{expand_genome, CellGrid, GridShape, Symmetry};
pub use objective::{BudgetMeter, Evaluator, Objective};
pub use record::{IterationEntry, RunRecord, StopReason};
pub use rng::RngStream;
