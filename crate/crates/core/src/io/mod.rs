//! Configuration files, experimental CSV input and report output.

pub mod config;
pub mod records;
pub mod report;
pub mod verify;

pub use config::{parse_config, OutputFormat, RunConfig};
pub use records::{read_experiment_csv, ExperimentRecord};
pub use report::fmt_float;
pub use verify::{run_verify, VerifyReport, VerifySettings};
