//! Batch front end: experiment configs, execution, and CSV/JSON output.

pub mod catalog;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::LoadedConfig;
pub use error::{CliError, CliResult};
pub use run::{run, verify_record, Experiment, Overrides, RunRecord};

/// Worker count from `CONVLAB_THREADS`, if set.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("CONVLAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("CONVLAB_THREADS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}
