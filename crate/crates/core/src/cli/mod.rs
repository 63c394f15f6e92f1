//! Scenario files, the experiment runner and CSV output.
//!
//! Every CSV starts with `#`-prefixed metadata (version, unit system and the
//! canonical config echo) followed by a single header line. Numbers are
//! written with `{:.12e}`, so identical configs give byte-identical files.

mod config;
mod runner;
mod scenarios;

pub use config::{parse_config, ConfigError, Experiment, Key, Kind, ScenarioConfig};
pub use runner::{run_scenario, CliError, RunReport};
pub use scenarios::{scenario, scenario_summary, SCENARIOS};
