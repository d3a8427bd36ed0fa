//! Config-driven experiment runner.

mod config;
mod report;
mod run;

pub use config::{insert_pair, parse_pairs, Command, ExperimentConfig, Format, OUT_DIR_ENV};
pub use report::{format_num, Cell, Report, ARTIFACT_VERSION};
pub use run::{execute, run, GROWTH_SLACK, IDENTITY_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
