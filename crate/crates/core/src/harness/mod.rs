//! Monte-Carlo runner, metrics, configuration and the CLI front end.

mod cli;
mod config;
mod link;
mod metrics;
mod sweep;

pub use cli::{cli_main, Cli};
pub use config::{Receiver, ReceiverPrior, SimConfig, SlicingRule, SCHEMA_VERSION};
pub use link::{Link, TbOutcome, TbTrace};
pub use metrics::{empirical_throughput, llr_entropy, throughput_ceiling, wilson_interval};
pub use sweep::{
    csv_string, emit_csv, read_csv, run_point, run_point_on, run_sweep, run_sweep_threads, run_sweep_with, CsvSink,
    PointResult, SimResult, BATCH, EARLY_STOP_REL_HALF_WIDTH,
};
