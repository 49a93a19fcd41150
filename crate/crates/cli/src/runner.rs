//! One-run orchestration: build initial data, integrate, evaluate the
//! requested certificates, and write artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bicluster_core::certificates::{
    check_theorem31_hypotheses, monitor_theorem41, monitor_theorem51, verify_lyapunov,
    verify_theorem31_conclusions, CertStatus, CertificateResult,
};
use bicluster_core::diagnostics::{
    detect_stages, flocking_report, FlockingReport, StageReport, StageThresholds,
};
use bicluster_core::integrator::{simulate, IntegratorError, SimConfig, Trajectory};
use bicluster_core::model::SystemState;

use crate::config::{generate_initial, to_flat, CertificateKind, ConfigError, RunConfig};
use crate::output::{
    frames_csv, states_csv, summary_json, write_text, DivergenceInfo, OutputFiles, RunSummary,
};

/// Everything produced by one run, before anything touches the filesystem.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub initial: SystemState,
    pub trajectory: Trajectory,
    /// Blow-up time when the integrator diverged; the trajectory is then
    /// the surviving prefix.
    pub diverged: Option<f64>,
    pub stages: Option<StageReport>,
    pub flocking: Option<FlockingReport>,
    pub certificates: Vec<CertificateResult>,
}

impl RunOutcome {
    pub fn any_violation(&self) -> bool {
        self.certificates
            .iter()
            .any(|c| c.status == CertStatus::Violated)
    }
}

/// Runs the simulation described by `config` and evaluates its
/// certificates. Integrator blow-up is not an error at this level: the
/// partial trajectory is analyzed and reported, and callers decide the
/// exit status.
pub fn execute(config: &RunConfig) -> Result<RunOutcome, ConfigError> {
    let problems = config.model.validate();
    if !problems.is_empty() {
        return Err(ConfigError::Invalid(problems.join("; ")));
    }
    let initial = generate_initial(&config.init, &config.model, config.seed)?;
    let sim = SimConfig {
        params: config.model.clone(),
        initial: initial.clone(),
        dt: config.sim.dt,
        t_end: config.sim.t_end,
        sample_stride: config.sim.sample_stride,
    };
    let (trajectory, diverged) = match simulate(&sim) {
        Ok(traj) => (traj, None),
        Err(IntegratorError::Diverged { t, partial }) => (partial, Some(t)),
        Err(IntegratorError::Model(e)) => return Err(ConfigError::Invalid(e.to_string())),
        Err(IntegratorError::InvalidConfig(msg)) => return Err(ConfigError::Invalid(msg)),
    };

    let stages = detect_stages(&trajectory, &config.model, StageThresholds::default()).ok();
    let flocking = if trajectory.frames.len() >= 2 {
        Some(flocking_report(&trajectory, &config.model))
    } else {
        None
    };

    let mut certificates = Vec::new();
    for kind in &config.certificates {
        match kind {
            CertificateKind::Theorem31 => {
                let hyp = check_theorem31_hypotheses(&initial, &config.model);
                let radii = hyp
                    .details
                    .get("x_m")
                    .copied()
                    .zip(hyp.details.get("y_m").copied());
                certificates.push(hyp);
                // The envelope conclusions need the fitted radii; when the
                // feasibility check could not produce them, the envelope
                // has nothing to verify against.
                let conclusions = match radii {
                    Some((x_m, y_m)) => {
                        verify_theorem31_conclusions(&trajectory, &config.model, x_m, y_m)
                    }
                    None => CertificateResult {
                        name: "theorem31_conclusions".to_string(),
                        status: CertStatus::NotApplicable,
                        margin: 0.0,
                        witness_time: None,
                        details: BTreeMap::new(),
                    },
                };
                certificates.push(conclusions);
            }
            CertificateKind::Theorem41 => {
                certificates.push(monitor_theorem41(&trajectory, &config.model));
            }
            CertificateKind::Theorem51 => {
                certificates.push(monitor_theorem51(&trajectory, &config.model));
            }
            CertificateKind::Lyapunov => {
                certificates.push(verify_lyapunov(&trajectory, &config.model));
            }
        }
    }

    Ok(RunOutcome {
        config: config.clone(),
        initial,
        trajectory,
        diverged,
        stages,
        flocking,
        certificates,
    })
}

/// Artifact paths produced by [`write_artifacts`], relative to the output
/// directory.
#[derive(Debug, Clone)]
pub struct WrittenArtifacts {
    pub csv: String,
    pub states: Option<String>,
    pub json: String,
}

/// Assembles the JSON summary for an outcome. File names are kept relative
/// so identical runs in different directories stay byte-identical.
pub fn build_summary(
    outcome: &RunOutcome,
    preset: Option<&str>,
    dump_states: bool,
) -> RunSummary {
    RunSummary {
        version: env!("CARGO_PKG_VERSION").to_string(),
        preset: preset.map(|s| s.to_string()),
        seed: outcome.config.seed,
        config: to_flat(&outcome.config),
        diverged: outcome.diverged.map(|t| DivergenceInfo { t }),
        samples: outcome.trajectory.times.len(),
        t_final: outcome.trajectory.times.last().copied().unwrap_or(0.0),
        final_frame: outcome.trajectory.frames.last().cloned(),
        stages: outcome.stages.clone(),
        flocking: outcome.flocking,
        certificates: outcome.certificates.clone(),
        outputs: OutputFiles {
            csv: "run.csv".to_string(),
            states: dump_states.then(|| "states.csv".to_string()),
            json: "summary.json".to_string(),
        },
    }
}

/// Writes `run.csv`, `summary.json`, and optionally `states.csv` into
/// `out_dir`, creating the directory if needed.
pub fn write_artifacts(
    out_dir: &Path,
    outcome: &RunOutcome,
    preset: Option<&str>,
    dump_states: bool,
) -> Result<WrittenArtifacts, ConfigError> {
    fs::create_dir_all(out_dir).map_err(|e| ConfigError::Io {
        path: out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    let summary = build_summary(outcome, preset, dump_states);
    write_text(&out_dir.join("run.csv"), &frames_csv(&outcome.trajectory))?;
    if dump_states {
        write_text(
            &out_dir.join("states.csv"),
            &states_csv(&outcome.trajectory, &outcome.config.model),
        )?;
    }
    write_text(&out_dir.join("summary.json"), &summary_json(&summary))?;
    Ok(WrittenArtifacts {
        csv: "run.csv".to_string(),
        states: dump_states.then(|| "states.csv".to_string()),
        json: "summary.json".to_string(),
    })
}
