//! Configuration-driven scenarios, reports and the regression suite.

pub mod config;
pub mod report;
pub mod scenarios;
pub mod suite;

pub use config::{Command, Config, ConfigError, DEFAULT_SEED};
pub use report::{Check, RunReport, Table};
pub use scenarios::{run_scenario, RunOptions};
pub use suite::{run_command, run_suite, run_suite_named, SuiteReport, WORKERS_ENV};
