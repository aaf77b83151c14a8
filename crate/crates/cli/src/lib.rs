//! Command-line front end for the SPDC interference simulator: declarative
//! TOML scenarios, figure-reproduction presets, and deterministic CSV/JSON
//! (and optional SVG) emission.

// validators use `!(x > 0.0)` so NaN fails validation too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::{ConfigError, ResolvedScenario, ScenarioFile};
pub use presets::{catalog, expand, suite_ids, Preset};
pub use runner::{oracle_check, run_preset_suite, run_scenario};
