//! Artifact formats: the per-run frames CSV, the optional per-sample state
//! dump, and the JSON run summary.
//!
//! Everything here is deterministic byte-for-byte: fixed column orders,
//! fixed 17-significant-digit float formatting, and JSON maps held in
//! sorted containers. Identical runs must produce identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bicluster_core::certificates::CertificateResult;
use bicluster_core::diagnostics::{DiagnosticsFrame, FlockingReport, StageReport};
use bicluster_core::integrator::Trajectory;
use bicluster_core::model::ModelParams;
use serde::Serialize;

use crate::config::ConfigError;

/// Column order of the frames CSV. This order is a stable external
/// contract; append-only if it ever has to grow.
pub const FRAME_COLUMNS: [&str; 11] = [
    "t",
    "m2",
    "m2_hat",
    "center_sep",
    "dx",
    "dv",
    "dy",
    "dw",
    "min_inter_dist",
    "psi_d_upper",
    "psi_s_lower",
];

/// Formats a float with 17 significant digits, enough for exact
/// round-tripping of any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders the frames CSV (header plus one row per recorded sample).
pub fn frames_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (trajectory.times.len() + 1));
    out.push_str(&FRAME_COLUMNS.join(","));
    out.push('\n');
    for (t, frame) in trajectory.times.iter().zip(&trajectory.frames) {
        let cols = [
            *t,
            frame.m2,
            frame.m2_hat,
            frame.center_sep,
            frame.dx,
            frame.dv,
            frame.dy,
            frame.dw,
            frame.min_inter_dist,
            frame.psi_d_upper,
            frame.psi_s_lower,
        ];
        let row: Vec<String> = cols.iter().map(|x| fmt_float(*x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Renders the per-sample particle state dump: one row per particle per
/// recorded time, with group 1 listed before group 2.
pub fn states_csv(trajectory: &Trajectory, params: &ModelParams) -> String {
    let dim = params.dim;
    let mut header = vec!["t".to_string(), "group".to_string(), "index".to_string()];
    for k in 0..dim {
        header.push(format!("x{k}"));
    }
    for k in 0..dim {
        header.push(format!("v{k}"));
    }
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for (t, state) in trajectory.times.iter().zip(&trajectory.states) {
        let blocks = [(1usize, &state.x, &state.v), (2usize, &state.y, &state.w)];
        for (group, pos, vel) in blocks {
            let n = pos.len() / dim;
            for i in 0..n {
                let mut row = vec![fmt_float(*t), group.to_string(), i.to_string()];
                for k in 0..dim {
                    row.push(fmt_float(pos[i * dim + k]));
                }
                for k in 0..dim {
                    row.push(fmt_float(vel[i * dim + k]));
                }
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    out
}

/// Where a run diverged, when it did.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DivergenceInfo {
    pub t: f64,
}

/// File names (relative to the output directory) of a run's artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct OutputFiles {
    pub csv: String,
    pub states: Option<String>,
    pub json: String,
}

/// The JSON summary written beside the frames CSV. Field order is the
/// serialization order; map-valued fields are sorted, so the document is
/// byte-stable across runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub version: String,
    pub preset: Option<String>,
    pub seed: u64,
    /// Effective configuration, flattened to the same `key = value` pairs
    /// the parser accepts.
    pub config: BTreeMap<String, String>,
    /// Present when the integrator blew up; artifacts then cover only the
    /// prefix of the run up to this time.
    pub diverged: Option<DivergenceInfo>,
    pub samples: usize,
    pub t_final: f64,
    pub final_frame: Option<DiagnosticsFrame>,
    pub stages: Option<StageReport>,
    pub flocking: Option<FlockingReport>,
    pub certificates: Vec<CertificateResult>,
    pub outputs: OutputFiles,
}

/// Serializes the summary with a trailing newline.
pub fn summary_json(summary: &RunSummary) -> String {
    let mut text = serde_json::to_string_pretty(summary)
        .expect("summary contains only finite floats and plain data");
    text.push('\n');
    text
}

/// Writes text to a file, mapping failures onto configuration-class errors
/// so the caller can exit with the I/O-or-config code.
pub fn write_text(path: &Path, text: &str) -> Result<(), ConfigError> {
    fs::write(path, text).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bicluster_core::integrator::{simulate, SimConfig};
    use bicluster_core::model::{ModelParams, SystemState, WeightSpec};

    fn tiny_trajectory() -> (Trajectory, ModelParams) {
        let params = ModelParams {
            n1: 1,
            n2: 1,
            dim: 2,
            kappa_s: 0.0,
            kappa_d: 1.0,
            delta: 0.0,
            psi_s: WeightSpec::constant(1.0),
            psi_d: WeightSpec::constant(1.0),
        };
        let config = SimConfig {
            params: params.clone(),
            initial: SystemState {
                x: vec![0.0, 0.0],
                v: vec![1.0, 0.0],
                y: vec![1.0, 0.0],
                w: vec![-1.0, 0.0],
            },
            dt: 0.25,
            t_end: 0.5,
            sample_stride: 1,
        };
        (simulate(&config).unwrap(), params)
    }

    #[test]
    fn float_format_round_trips_exactly() {
        for x in [0.1, 1.0 / 3.0, f64::MIN_POSITIVE, 1e300, -2.5e-17, 0.0] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn frames_csv_has_pinned_header_and_row_shape() {
        let (traj, _) = tiny_trajectory();
        let csv = frames_csv(&traj);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,m2,m2_hat,center_sep,dx,dv,dy,dw,min_inter_dist,psi_d_upper,psi_s_lower"
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3); // t = 0, 0.25, 0.5
        for row in rows {
            assert_eq!(row.split(',').count(), FRAME_COLUMNS.len());
        }
    }

    #[test]
    fn states_csv_lists_both_groups_per_sample() {
        let (traj, params) = tiny_trajectory();
        let csv = states_csv(&traj, &params);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,group,index,x0,x1,v0,v1");
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3 * 2); // 3 samples x (1 + 1) particles
        assert!(rows[0].split(',').nth(1) == Some("1"));
        assert!(rows[1].split(',').nth(1) == Some("2"));
    }

    #[test]
    fn summary_serialization_is_stable() {
        let (traj, params) = tiny_trajectory();
        let summary = RunSummary {
            version: "0.0.0-test".to_string(),
            preset: Some("two-particle".to_string()),
            seed: 1,
            config: BTreeMap::from([("seed".to_string(), "1".to_string())]),
            diverged: None,
            samples: traj.times.len(),
            t_final: *traj.times.last().unwrap(),
            final_frame: traj.frames.last().cloned(),
            stages: None,
            flocking: Some(bicluster_core::diagnostics::flocking_report(&traj, &params)),
            certificates: Vec::new(),
            outputs: OutputFiles {
                csv: "run.csv".to_string(),
                states: None,
                json: "summary.json".to_string(),
            },
        };
        let a = summary_json(&summary);
        let b = summary_json(&summary);
        assert_eq!(a, b);
        assert!(a.starts_with("{\n  \"version\""));
        assert!(a.ends_with("}\n"));
    }
}
