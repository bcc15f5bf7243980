//! Stock-and-flow simulation of software maintenance under technical debt.
//!
//! The [`engine`] module holds generic system-dynamics machinery; [`model`]
//! wires the maintenance equations into it; [`policy`] and [`scenario`]
//! describe what to run; [`report`] turns runs into CSV, summaries,
//! comparisons, and sweeps; [`cli`] is the command-line front end.

pub mod cli;
pub mod engine;
pub mod model;
pub mod policy;
pub mod report;
pub mod scenario;

pub use engine::{IntegrationSettings, RunResult, TableFunction};
pub use model::{ModelParameters, StockState};
pub use policy::AllocationPolicy;
pub use report::{ComparisonReport, SummaryMetrics};
pub use scenario::ScenarioSpec;

/// A value that breaks a documented constraint, identified by its dotted key.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid {key}: {constraint}")]
pub struct ValidationError {
    pub key: String,
    pub constraint: String,
}

impl ValidationError {
    pub fn new(key: impl Into<String>, constraint: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            constraint: constraint.into(),
        }
    }
}
