//! One-axis parameter sweeps: independent runs over a list of values,
//! optionally in parallel, with per-run artifacts and one aggregate CSV.
//!
//! Rows are keyed by the sorted axis values, and each run is fully
//! determined by its own configuration, so the aggregate is byte-identical
//! for any parallelism level.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use bicluster_core::diagnostics::{DiagnosticsFrame, StageReport};

use crate::config::{apply_key, ConfigError, RunConfig};
use crate::output::fmt_float;
use crate::runner::{execute, write_artifacts};

/// Sweep description: which dotted configuration key to vary, the values
/// it takes, and how many worker threads to use.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: String,
    pub values: Vec<f64>,
    pub parallelism: usize,
}

/// One aggregate row. `error` is set when the run could not execute at
/// all; `diverged` when it blew up mid-flight (partial artifacts exist).
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub dir: String,
    pub error: Option<String>,
    pub diverged: Option<f64>,
    pub stages: Option<StageReport>,
    pub terminal: Option<DiagnosticsFrame>,
    /// Certificate name -> margin, for every certificate the run evaluated.
    pub margins: Vec<(String, f64)>,
    pub any_violation: bool,
}

/// Aggregate CSV column order; a stable external contract.
pub const SWEEP_COLUMNS: [&str; 17] = [
    "value",
    "dir",
    "error",
    "diverged_t",
    "t_velocity_sep",
    "t_spatial_sep",
    "t_flock",
    "terminal_m2",
    "terminal_m2_hat",
    "terminal_dv",
    "terminal_center_sep",
    "terminal_min_inter_dist",
    "margin_theorem31_hypotheses",
    "margin_theorem31_conclusions",
    "margin_theorem41_monitor",
    "margin_theorem51_monitor",
    "margin_lyapunov_functionals",
];

const MARGIN_NAMES: [&str; 5] = [
    "theorem31_hypotheses",
    "theorem31_conclusions",
    "theorem41_monitor",
    "theorem51_monitor",
    "lyapunov_functionals",
];

fn opt_float(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_float(v),
        None => "nan".to_string(),
    }
}

fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n', '\r'], ";")
}

/// Renders the aggregate CSV for rows already in ascending axis order.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(&SWEEP_COLUMNS.join(","));
    out.push('\n');
    for row in rows {
        let mut cols: Vec<String> = vec![
            fmt_float(row.value),
            row.dir.clone(),
            row.error.as_deref().map(sanitize).unwrap_or_default(),
            opt_float(row.diverged),
            opt_float(row.stages.as_ref().and_then(|s| s.t_velocity_sep)),
            opt_float(row.stages.as_ref().and_then(|s| s.t_spatial_sep)),
            opt_float(row.stages.as_ref().and_then(|s| s.t_flock)),
            opt_float(row.terminal.as_ref().map(|f| f.m2)),
            opt_float(row.terminal.as_ref().map(|f| f.m2_hat)),
            opt_float(row.terminal.as_ref().map(|f| f.dv)),
            opt_float(row.terminal.as_ref().map(|f| f.center_sep)),
            opt_float(row.terminal.as_ref().map(|f| f.min_inter_dist)),
        ];
        for name in MARGIN_NAMES {
            let margin = row
                .margins
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, m)| *m);
            cols.push(opt_float(margin));
        }
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Everything a finished sweep knows.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
}

impl SweepOutcome {
    pub fn any_violation(&self) -> bool {
        self.rows.iter().any(|r| r.any_violation)
    }

    pub fn any_failure(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.error.is_some() || r.diverged.is_some())
    }
}

fn run_one(
    base: &RunConfig,
    axis: &str,
    value: f64,
    dir_name: &str,
    out_dir: &Path,
    preset: Option<&str>,
) -> SweepRow {
    let mut row = SweepRow {
        value,
        dir: dir_name.to_string(),
        error: None,
        diverged: None,
        stages: None,
        terminal: None,
        margins: Vec::new(),
        any_violation: false,
    };
    let mut cfg = base.clone();
    if let Err(e) = apply_key(&mut cfg, axis, &fmt_float(value)) {
        row.error = Some(e.to_string());
        return row;
    }
    match execute(&cfg) {
        Ok(outcome) => {
            if let Err(e) = write_artifacts(&out_dir.join(dir_name), &outcome, preset, false) {
                row.error = Some(e.to_string());
            }
            row.diverged = outcome.diverged;
            row.stages = outcome.stages.clone();
            row.terminal = outcome.trajectory.frames.last().cloned();
            row.margins = outcome
                .certificates
                .iter()
                .map(|c| (c.name.clone(), c.margin))
                .collect();
            row.any_violation = outcome.any_violation();
        }
        Err(e) => {
            row.error = Some(e.to_string());
        }
    }
    row
}

/// Runs the sweep and writes per-run artifacts plus `sweep.csv` under
/// `out_dir`. Values are sorted ascending before anything runs, so row
/// order, directory names, and bytes are independent of input order and
/// of `parallelism`. A failing run is recorded in its row and does not
/// abort the others.
pub fn run_sweep(
    base: &RunConfig,
    spec: &SweepSpec,
    out_dir: &Path,
    preset: Option<&str>,
) -> Result<SweepOutcome, ConfigError> {
    if spec.values.is_empty() {
        return Err(ConfigError::Invalid(
            "sweep needs at least one axis value".to_string(),
        ));
    }
    if spec.values.iter().any(|v| !v.is_finite()) {
        return Err(ConfigError::Invalid(
            "sweep values must be finite".to_string(),
        ));
    }
    // Probe the axis once so an unknown or non-numeric key fails before
    // any run starts.
    {
        let mut probe = base.clone();
        apply_key(&mut probe, &spec.axis, &fmt_float(spec.values[0]))?;
    }
    let mut values = spec.values.clone();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));

    std::fs::create_dir_all(out_dir).map_err(|e| ConfigError::Io {
        path: out_dir.display().to_string(),
        message: e.to_string(),
    })?;

    let workers = spec.parallelism.max(1).min(values.len());
    let slots: Vec<Mutex<Option<SweepRow>>> =
        values.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= values.len() {
                    break;
                }
                let dir_name = format!("run-{idx:03}");
                let row = run_one(base, &spec.axis, values[idx], &dir_name, out_dir, preset);
                *slots[idx].lock().unwrap() = Some(row);
            });
        }
    });
    let rows: Vec<SweepRow> = slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every index visited"))
        .collect();

    crate::output::write_text(&out_dir.join("sweep.csv"), &sweep_csv(&rows))?;
    Ok(SweepOutcome { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    fn quick_base() -> RunConfig {
        let mut cfg = preset("two-particle").unwrap();
        apply_key(&mut cfg, "sim.t_end", "0.5").unwrap();
        cfg
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let base = quick_base();
        let spec = SweepSpec {
            axis: "model.kappa_d".to_string(),
            values: vec![2.0, 0.5, 1.0],
            parallelism: 2,
        };
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_sweep(&base, &spec, dir.path(), Some("two-particle")).unwrap();
        let got: Vec<f64> = outcome.rows.iter().map(|r| r.value).collect();
        assert_eq!(got, vec![0.5, 1.0, 2.0]);
        for (i, row) in outcome.rows.iter().enumerate() {
            assert!(row.error.is_none());
            assert_eq!(row.dir, format!("run-{i:03}"));
            assert!(dir.path().join(&row.dir).join("summary.json").is_file());
        }
        assert!(dir.path().join("sweep.csv").is_file());
    }

    #[test]
    fn parallelism_does_not_change_bytes() {
        let base = quick_base();
        let mk = |par: usize| SweepSpec {
            axis: "model.kappa_d".to_string(),
            values: vec![0.5, 1.0, 1.5, 2.0],
            parallelism: par,
        };
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        run_sweep(&base, &mk(1), d1.path(), None).unwrap();
        run_sweep(&base, &mk(4), d2.path(), None).unwrap();
        let a = std::fs::read(d1.path().join("sweep.csv")).unwrap();
        let b = std::fs::read(d2.path().join("sweep.csv")).unwrap();
        assert_eq!(a, b);
        for i in 0..4 {
            let name = format!("run-{i:03}/summary.json");
            let a = std::fs::read(d1.path().join(&name)).unwrap();
            let b = std::fs::read(d2.path().join(&name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn bad_axis_fails_before_running() {
        let base = quick_base();
        let spec = SweepSpec {
            axis: "model.kappa_q".to_string(),
            values: vec![1.0],
            parallelism: 1,
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(run_sweep(&base, &spec, dir.path(), None).is_err());
    }

    #[test]
    fn failing_child_is_recorded_and_others_continue() {
        let base = quick_base();
        let spec = SweepSpec {
            // Negative coupling is rejected by model validation at run
            // time, after the axis probe succeeds syntactically.
            axis: "model.kappa_d".to_string(),
            values: vec![1.0, -1.0],
            parallelism: 2,
        };
        let dir = tempfile::tempdir().unwrap();
        let outcome = run_sweep(&base, &spec, dir.path(), None).unwrap();
        assert_eq!(outcome.rows.len(), 2);
        assert!(outcome.rows[0].error.is_some()); // value -1 sorts first
        assert!(outcome.rows[1].error.is_none());
        let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
        assert_eq!(csv.lines().count(), 3);
    }
}
