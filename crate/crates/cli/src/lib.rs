//! Configuration documents, scenario dispatch and CSV output for the
//! `cvfb` command-line tool.

pub mod document;
pub mod run;
pub mod table;

pub use document::{apply_overrides, parse_config, parse_sweep_arg, serialize_config, ConfigError};
pub use run::{run_scenario, RunError, Scenario};
pub use table::{Provenance, ResultTable, TableError};
