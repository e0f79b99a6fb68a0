//! Scenario runner for the `crmc` adaptive filters.
//!
//! A [`Scenario`] describes the array, sources, noise, trial count and the
//! parameter block of every algorithm under test. [`run_scenario`] runs all
//! algorithms over paired, seeded Monte-Carlo trials and returns one
//! [`RunRecord`] per (algorithm, trial); [`emit_csv`] writes learning curves,
//! beampatterns and a summary table. [`bench_step_times`] times single
//! filter steps.

pub mod bench;
pub mod csv_out;
pub mod error;
pub mod experiments;
pub mod runner;
pub mod scenario;

pub use bench::{bench_step_times, BenchResult};
pub use csv_out::{emit_csv, format_sig9, summarize, SummaryRow};
pub use error::{HarnessError, Result};
pub use runner::{run_scenario, Algorithm, RunRecord};
pub use scenario::{builtin, builtin_names, load_scenario, Scenario, ScenarioKind};
