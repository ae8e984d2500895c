//! Scenario runner and file formats around [`cliffield_core`].
//!
//! A scenario is a TOML file (or a built-in preset) naming one of the
//! `particle`, `string`, `field`, `check-symmetry` or `hj-verify` runs.
//! Running it writes CSV/JSON artifacts and a `report.json` with one entry
//! per embedded check.

pub mod config;
pub mod io;
pub mod presets;
pub mod report;
pub mod run;

pub use config::ScenarioConfig;
pub use report::{Check, RunReport, Status};
pub use run::{run_scenario, REPORT_FILE};

/// Exit status for configuration errors.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] cliffield_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Solver(_) | RunError::Io(_) => Status::SolverError.exit_code(),
        }
    }
}
