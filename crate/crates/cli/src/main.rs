//! `bicluster` — deterministic simulator and certificate checker for
//! two-group flocking dynamics.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 integrator
//! divergence (partial artifacts are still written and flagged in the
//! JSON summary), 4 certificate violation under `--strict`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bicluster::config::{apply_key, parse_config_text, ConfigError, RunConfig};
use bicluster::presets::{preset, render_catalog};
use bicluster::runner::{execute, write_artifacts};
use bicluster::sweep::{run_sweep, SweepSpec};

const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;
const EXIT_VIOLATED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bicluster",
    version,
    about = "Deterministic simulator and certificate checker for two-group flocking dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write run.csv + summary.json.
    Run(RunArgs),
    /// List the preset catalog.
    Presets,
    /// Vary one configuration key over a list of values.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Preset used as the base configuration.
    #[arg(long)]
    preset: Option<String>,
    /// Configuration file (flat `key = value` lines) applied on top of the
    /// preset or the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the integrator step size.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the simulation horizon.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Certificates to evaluate: `all`, `none`, or a comma-separated list
    /// of theorem31 | theorem41 | theorem51 | lyapunov.
    #[arg(long)]
    certificates: Option<String>,
    /// Directory for output artifacts.
    #[arg(long = "out-dir", default_value = "out")]
    out_dir: PathBuf,
    /// Exit with code 4 when any evaluated certificate is violated.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also write states.csv with every particle at every sample.
    #[arg(long = "dump-states")]
    dump_states: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dotted configuration key to vary (for example model.kappa_s).
    #[arg(long)]
    axis: String,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Worker threads; results are identical for any value.
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
}

/// Builds the effective configuration: preset (or defaults), then the
/// configuration file, then individual flag overrides.
fn resolve_config(common: &CommonArgs) -> Result<RunConfig, ConfigError> {
    let base = match &common.preset {
        Some(name) => preset(name)?,
        None => RunConfig::default(),
    };
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            parse_config_text(&text, base)?
        }
        None => base,
    };
    if let Some(seed) = common.seed {
        apply_key(&mut cfg, "seed", &seed.to_string())?;
    }
    if let Some(dt) = common.dt {
        apply_key(&mut cfg, "sim.dt", &format!("{dt:e}"))?;
    }
    if let Some(t_end) = common.t_end {
        apply_key(&mut cfg, "sim.t_end", &format!("{t_end:e}"))?;
    }
    if let Some(certs) = &common.certificates {
        apply_key(&mut cfg, "certificates", certs)?;
    }
    Ok(cfg)
}

fn cmd_run(args: &RunArgs) -> Result<u8, ConfigError> {
    let cfg = resolve_config(&args.common)?;
    let outcome = execute(&cfg)?;
    write_artifacts(
        &args.common.out_dir,
        &outcome,
        args.common.preset.as_deref(),
        args.dump_states,
    )?;
    for cert in &outcome.certificates {
        println!(
            "certificate {}: {:?} (margin {:.3e})",
            cert.name, cert.status, cert.margin
        );
    }
    println!(
        "wrote {} ({} samples, t_final {})",
        args.common.out_dir.join("summary.json").display(),
        outcome.trajectory.times.len(),
        outcome.trajectory.times.last().copied().unwrap_or(0.0)
    );
    if let Some(t) = outcome.diverged {
        eprintln!("run diverged at t = {t}; artifacts cover the surviving prefix");
        return Ok(EXIT_DIVERGED);
    }
    if args.common.strict && outcome.any_violation() {
        eprintln!("strict mode: at least one certificate is violated");
        return Ok(EXIT_VIOLATED);
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, ConfigError> {
    let cfg = resolve_config(&args.common)?;
    let spec = SweepSpec {
        axis: args.axis.clone(),
        values: args.values.clone(),
        parallelism: args.parallelism,
    };
    let outcome = run_sweep(
        &cfg,
        &spec,
        &args.common.out_dir,
        args.common.preset.as_deref(),
    )?;
    for row in &outcome.rows {
        let status = match (&row.error, row.diverged) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(t)) => format!("diverged at t = {t}"),
            (None, None) => "ok".to_string(),
        };
        println!("{} = {:e}: {status}", spec.axis, row.value);
    }
    println!(
        "wrote {} ({} rows)",
        args.common.out_dir.join("sweep.csv").display(),
        outcome.rows.len()
    );
    if args.common.strict && outcome.any_violation() {
        eprintln!("strict mode: at least one certificate is violated");
        return Ok(EXIT_VIOLATED);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Presets => {
            print!("{}", render_catalog());
            Ok(0)
        }
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
