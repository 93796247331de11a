//! Configuration-driven sweeps and validation runs on top of `layered-qed`.

pub mod config;
pub mod presets;
pub mod sweep;
pub mod validate;

pub use config::{parse_config, ConfigError, Output, RunConfig};
pub use sweep::{run_sweep, summarize, write_csv, Summary, Sweep, SweepError};
pub use validate::{run_validation, Options, Report};
