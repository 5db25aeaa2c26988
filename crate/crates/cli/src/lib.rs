//! Scenario runner: declarative configs in, deterministic artifacts out.

// `!(x > 0.0)` rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

pub use config::{Diagnostic, ScenarioConfig, Severity};
pub use output::Manifest;
pub use run::{run, RunError, Step};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 4;
