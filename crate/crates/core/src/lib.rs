//! Collective schedules: aggregating voters' preferred orderings of tasks
//! with durations into a single consensus schedule.
//!
//! The three aggregation objectives (total deviation, total tardiness and a
//! length-weighted Kendall tau) are solved exactly by a subset dynamic
//! program. Heuristics, axiom probes, instance generators and the experiment
//! pipelines live in their own modules.

pub mod axioms;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod fixtures;
pub mod generators;
pub mod heuristics;
pub mod io;
pub mod metrics;
pub mod model;
pub mod rules;

pub use error::{Error, Result};
pub use exact::{solve_exact, SolveOptions, SolveReport};
pub use model::{Instance, Objective, PreferenceProfile, Schedule, TaskSet};
pub use rules::Rule;
