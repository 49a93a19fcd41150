//! Command-line companion to `bicluster-core`: deterministic run
//! orchestration, the preset catalog, flat-file configuration, artifact
//! writers, and one-axis parameter sweeps.
//!
//! The core crate holds all the numerics; this crate owns everything that
//! touches an operating system — files, threads, argument parsing — and
//! the stability guarantees of the artifact formats.

pub mod config;
pub mod output;
pub mod presets;
pub mod rng;
pub mod runner;
pub mod sweep;

pub use config::{apply_key, generate_initial, parse_config_text, to_flat, ConfigError, RunConfig};
pub use presets::{catalog, preset};
pub use runner::{execute, write_artifacts, RunOutcome};
pub use sweep::{run_sweep, SweepOutcome, SweepSpec};
