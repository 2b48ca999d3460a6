//! Command harness for the qubit measurement engine: plain key=value configs
//! in, plot-ready CSV and JSON out.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{parse_config, ConfigError, GridSpec, Mode, RunConfig};
pub use run::{execute, RuntimeError};
