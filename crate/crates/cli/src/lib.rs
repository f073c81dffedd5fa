//! Scenario runner: JSON configs in, CSV series and a hashed run manifest out.

pub mod config;
pub mod error;
pub mod presets;
pub mod run;

pub use config::{load_config, parse_config, FlagOverrides, ScenarioConfig};
pub use error::CliError;
pub use run::{execute, run, run_sweep, Execution, RunOutcome, SweepOutcome};

/// JSON schema of the config document.
pub const CONFIG_SCHEMA: &str = include_str!("../config.schema.json");
