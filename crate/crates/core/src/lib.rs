//! Exact solvers, benchmark instance generators, MILP export and solution
//! analysis for the MaxSum, MaxMin, MaxMinSum and MinDiff diversity models.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod instance;
pub mod milp;
pub mod objectives;
pub mod plot;
pub mod solvers;

pub use error::{Error, Result};
pub use instance::{Family, Instance};
pub use objectives::{ObjectiveKind, Solution};
