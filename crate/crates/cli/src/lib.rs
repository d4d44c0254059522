//! Batch front end for the rotating-field Dirac solver: configuration parsing,
//! experiment orchestration, and CSV or JSON reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command, Run};
pub use config::{Format, InitialState, RunConfig, TimeEnd, Tolerances};
pub use error::CliError;
pub use output::{format_float, Cell, Table, PHASE_BRANCH};
