//! Batch front-end for `gfscma`: JSON run configs, analytic and simulated
//! sweeps written as CSV, and the `verify` release gate.

// `!(x > 0.0)` guards reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;
pub mod verify;

pub use config::{ConfigError, ConfigFile, Mode, RunConfig, SweepSpec, SweepVar};
pub use run::{render_csv, run_asep, run_psuc, RunError, Table};
pub use verify::{run_verify, run_verify_with, Check, Report};
