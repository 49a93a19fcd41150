//! Scalar observables, micro-macro decomposition, and stage detection.
//!
//! Everything here is a pure function of a state (or a recorded trajectory):
//! normalized velocity moments, fluctuation energy, position/velocity
//! diameters, extremal communication weights, the three-stage bi-clustering
//! detector, and a finite-horizon flocking summary.

use alloc::vec::Vec;

use crate::integrator::Trajectory;
use crate::model::{ModelParams, SystemState};

/// All per-sample observables recorded along a trajectory.
///
/// `m2 = m2_v + m2_w` is the total normalized kinetic energy, `m2_hat` the
/// energy of the velocity fluctuations around each group mean. The `psi_*`
/// extremes evaluate each communication weight at the extreme distance of
/// the relevant pair set: intra-group pairs of both groups for `psi_s`,
/// inter-group pairs for `psi_d`. Weights are nonincreasing, so the lower
/// extreme sits at the maximum distance and vice versa.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiagnosticsFrame {
    pub m1_v: Vec<f64>,
    pub m1_w: Vec<f64>,
    pub m2_v: f64,
    pub m2_w: f64,
    pub m2: f64,
    pub m2_hat: f64,
    pub center_sep: f64,
    pub dx: f64,
    pub dv: f64,
    pub dy: f64,
    pub dw: f64,
    pub min_inter_dist: f64,
    pub max_inter_dist: f64,
    pub psi_s_lower: f64,
    pub psi_s_upper: f64,
    pub psi_d_lower: f64,
    pub psi_d_upper: f64,
}

impl DiagnosticsFrame {
    /// Assemble the full frame for one state.
    pub fn compute(state: &SystemState, params: &ModelParams) -> Self {
        debug_assert!(state.validate_shape(params).is_ok());
        let moments = moments(state, params);
        let m2_hat = fluctuation_energy(state, params);
        let diam = diameters(state, params);
        let ext = inter_group_extremes(state, params);
        let vc = mean(&state.v, params.dim);
        let wc = mean(&state.w, params.dim);
        let center_sep = libm::sqrt(
            vc.iter().zip(&wc).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        );
        DiagnosticsFrame {
            m1_v: moments.m1_v,
            m1_w: moments.m1_w,
            m2_v: moments.m2_v,
            m2_w: moments.m2_w,
            m2: moments.m2,
            m2_hat,
            center_sep,
            dx: diam.dx,
            dv: diam.dv,
            dy: diam.dy,
            dw: diam.dw,
            min_inter_dist: ext.min_inter_dist,
            max_inter_dist: ext.max_inter_dist,
            psi_s_lower: ext.psi_s_lower,
            psi_s_upper: ext.psi_s_upper,
            psi_d_lower: ext.psi_d_lower,
            psi_d_upper: ext.psi_d_upper,
        }
    }
}

/// Normalized first and second velocity moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    /// Group mean velocities `(1/n) sum v_i`.
    pub m1_v: Vec<f64>,
    pub m1_w: Vec<f64>,
    /// Mean squared speeds `(1/n) sum |v_i|^2`.
    pub m2_v: f64,
    pub m2_w: f64,
    /// `m2_v + m2_w`.
    pub m2: f64,
}

/// Group averages plus mean-zero fluctuations (same flat layout as the
/// state arrays).
#[derive(Debug, Clone, PartialEq)]
pub struct MicroMacro {
    pub xc: Vec<f64>,
    pub vc: Vec<f64>,
    pub yc: Vec<f64>,
    pub wc: Vec<f64>,
    pub x_hat: Vec<f64>,
    pub v_hat: Vec<f64>,
    pub y_hat: Vec<f64>,
    pub w_hat: Vec<f64>,
}

/// Detected onset times of the three bi-clustering stages; a stage is
/// absent when its condition is never met persistently (through the end of
/// the recorded horizon).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StageReport {
    /// First time from which `min_{i,j} |v_i - w_j| >= eps_v` onward.
    pub t_velocity_sep: Option<f64>,
    /// First time from which `min_inter_dist >= eps_x` onward.
    pub t_spatial_sep: Option<f64>,
    /// First time from which `m2_hat <= eps_f` onward.
    pub t_flock: Option<f64>,
    pub thresholds: StageThresholds,
}

/// Thresholds for stage detection.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StageThresholds {
    pub eps_v: f64,
    pub eps_x: f64,
    pub eps_f: f64,
}

impl Default for StageThresholds {
    fn default() -> Self {
        Self { eps_v: 0.1, eps_x: 0.5, eps_f: 1e-4 }
    }
}

/// Finite-horizon proxies for asymptotic bi-cluster flocking: bounded
/// position spreads, vanishing velocity spreads, and unbounded group
/// separation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FlockingReport {
    pub sup_dx: f64,
    pub sup_dy: f64,
    pub terminal_dv: f64,
    pub terminal_dw: f64,
    /// `min_{i,j} |v_i - w_j|` at the final sample and its minimum over the run.
    pub terminal_min_inter_vel: f64,
    pub min_min_inter_vel: f64,
    pub terminal_min_inter_dist: f64,
    /// Least-squares slope of `min_inter_dist` over the final third of the
    /// horizon (linear growth fit).
    pub separation_slope: f64,
    /// Slope of `log(min_inter_dist)` over the same window; absent when the
    /// distance touches zero there.
    pub separation_log_slope: Option<f64>,
}

/// Errors from trajectory-level diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticsError {
    /// Stage detection needs at least two samples.
    TooFewSamples { len: usize },
}

impl core::fmt::Display for DiagnosticsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DiagnosticsError::TooFewSamples { len } => {
                write!(f, "stage detection requires at least 2 samples, got {len}")
            }
        }
    }
}

fn mean(flat: &[f64], dim: usize) -> Vec<f64> {
    let n = flat.len() / dim;
    let mut m = alloc::vec![0.0; dim];
    for i in 0..n {
        for c in 0..dim {
            m[c] += flat[i * dim + c];
        }
    }
    for c in &mut m {
        *c /= n as f64;
    }
    m
}

fn mean_sq_norm(flat: &[f64], dim: usize) -> f64 {
    let n = flat.len() / dim;
    flat.iter().map(|c| c * c).sum::<f64>() / n as f64
}

fn max_pair_dist(flat: &[f64], dim: usize) -> f64 {
    let n = flat.len() / dim;
    let mut max2 = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut d2 = 0.0;
            for c in 0..dim {
                let d = flat[j * dim + c] - flat[i * dim + c];
                d2 += d * d;
            }
            max2 = max2.max(d2);
        }
    }
    libm::sqrt(max2)
}

fn min_pair_dist(flat: &[f64], dim: usize) -> Option<f64> {
    let n = flat.len() / dim;
    if n < 2 {
        return None;
    }
    let mut min2 = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut d2 = 0.0;
            for c in 0..dim {
                let d = flat[j * dim + c] - flat[i * dim + c];
                d2 += d * d;
            }
            min2 = min2.min(d2);
        }
    }
    Some(libm::sqrt(min2))
}

/// Normalized velocity moments of both groups.
pub fn moments(state: &SystemState, params: &ModelParams) -> Moments {
    let dim = params.dim;
    let m2_v = mean_sq_norm(&state.v, dim);
    let m2_w = mean_sq_norm(&state.w, dim);
    Moments {
        m1_v: mean(&state.v, dim),
        m1_w: mean(&state.w, dim),
        m2_v,
        m2_w,
        m2: m2_v + m2_w,
    }
}

/// Split the state into group averages and mean-zero fluctuations.
pub fn micro_macro(state: &SystemState, params: &ModelParams) -> MicroMacro {
    let dim = params.dim;
    let xc = mean(&state.x, dim);
    let vc = mean(&state.v, dim);
    let yc = mean(&state.y, dim);
    let wc = mean(&state.w, dim);
    let center = |flat: &[f64], c0: &[f64]| -> Vec<f64> {
        flat.iter().enumerate().map(|(k, val)| val - c0[k % dim]).collect()
    };
    MicroMacro {
        x_hat: center(&state.x, &xc),
        v_hat: center(&state.v, &vc),
        y_hat: center(&state.y, &yc),
        w_hat: center(&state.w, &wc),
        xc,
        vc,
        yc,
        wc,
    }
}

/// Fluctuation kinetic energy `(1/n1) sum |v_i - vc|^2 + (1/n2) sum |w_j - wc|^2`.
///
/// Computed directly from centered velocities rather than as `m2 - |vc|^2
/// - |wc|^2`, which would lose digits once the flocks align.
pub fn fluctuation_energy(state: &SystemState, params: &ModelParams) -> f64 {
    let dim = params.dim;
    let vc = mean(&state.v, dim);
    let wc = mean(&state.w, dim);
    let energy = |flat: &[f64], c0: &[f64]| -> f64 {
        let n = flat.len() / dim;
        flat.iter()
            .enumerate()
            .map(|(k, val)| {
                let d = val - c0[k % dim];
                d * d
            })
            .sum::<f64>()
            / n as f64
    };
    energy(&state.v, &vc) + energy(&state.w, &wc)
}

/// Position and velocity diameters per group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diameters {
    pub dx: f64,
    pub dv: f64,
    pub dy: f64,
    pub dw: f64,
}

/// Maximum intra-group pairwise distances (positions and velocities).
pub fn diameters(state: &SystemState, params: &ModelParams) -> Diameters {
    let dim = params.dim;
    Diameters {
        dx: max_pair_dist(&state.x, dim),
        dv: max_pair_dist(&state.v, dim),
        dy: max_pair_dist(&state.y, dim),
        dw: max_pair_dist(&state.w, dim),
    }
}

/// Inter-group distance range and extremal weight values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterGroupExtremes {
    pub min_inter_dist: f64,
    pub max_inter_dist: f64,
    pub psi_s_lower: f64,
    pub psi_s_upper: f64,
    pub psi_d_lower: f64,
    pub psi_d_upper: f64,
}

/// Extremal communication weights at the current configuration.
///
/// `psi_s` extremes range over intra-group pairs of both groups; `psi_d`
/// extremes range over inter-group pairs, which is the quantity the decay
/// estimates actually use. When neither group has a proper pair (both
/// singletons), the intra extremes degenerate to the weight at distance 0.
pub fn inter_group_extremes(state: &SystemState, params: &ModelParams) -> InterGroupExtremes {
    let dim = params.dim;
    let (n1, n2) = (params.n1, params.n2);

    let mut min_inter2 = f64::INFINITY;
    let mut max_inter2 = 0.0f64;
    for i in 0..n1 {
        for j in 0..n2 {
            let mut d2 = 0.0;
            for c in 0..dim {
                let d = state.y[j * dim + c] - state.x[i * dim + c];
                d2 += d * d;
            }
            min_inter2 = min_inter2.min(d2);
            max_inter2 = max_inter2.max(d2);
        }
    }
    let min_inter_dist = libm::sqrt(min_inter2);
    let max_inter_dist = libm::sqrt(max_inter2);

    let max_intra = max_pair_dist(&state.x, dim).max(max_pair_dist(&state.y, dim));
    let min_intra = match (min_pair_dist(&state.x, dim), min_pair_dist(&state.y, dim)) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => 0.0,
    };

    InterGroupExtremes {
        min_inter_dist,
        max_inter_dist,
        psi_s_lower: params.psi_s.eval_unchecked(max_intra),
        psi_s_upper: params.psi_s.eval_unchecked(min_intra),
        psi_d_lower: params.psi_d.eval_unchecked(max_inter_dist),
        psi_d_upper: params.psi_d.eval_unchecked(min_inter_dist),
    }
}

/// Minimum inter-group velocity distance `min_{i,j} |v_i - w_j|`.
pub fn min_inter_velocity_dist(state: &SystemState, params: &ModelParams) -> f64 {
    let dim = params.dim;
    let mut min2 = f64::INFINITY;
    for i in 0..params.n1 {
        for j in 0..params.n2 {
            let mut d2 = 0.0;
            for c in 0..dim {
                let d = state.w[j * dim + c] - state.v[i * dim + c];
                d2 += d * d;
            }
            min2 = min2.min(d2);
        }
    }
    libm::sqrt(min2)
}

/// Find the first sample index from which `ok` stays true through the end;
/// `None` when the final sample itself fails.
fn persistent_onset(ok: &[bool]) -> Option<usize> {
    let mut onset = None;
    for (k, &flag) in ok.iter().enumerate().rev() {
        if flag {
            onset = Some(k);
        } else {
            break;
        }
    }
    onset
}

/// Interpolate the crossing time of `q` through `threshold` between samples
/// `k-1` and `k`; `k = 0` means the condition held from the start.
fn crossing_time(times: &[f64], q: &[f64], k: usize, threshold: f64) -> f64 {
    if k == 0 {
        return times[0];
    }
    let (t0, t1) = (times[k - 1], times[k]);
    let (q0, q1) = (q[k - 1], q[k]);
    if q1 == q0 {
        return t1;
    }
    let frac = (threshold - q0) / (q1 - q0);
    t0 + frac.clamp(0.0, 1.0) * (t1 - t0)
}

/// Detect the three bi-clustering stages along a recorded trajectory.
///
/// Each stage time is the first sample time from which the stage condition
/// holds for every remaining sample, refined by linear interpolation of the
/// monitored quantity between the bracketing samples.
pub fn detect_stages(
    trajectory: &Trajectory,
    params: &ModelParams,
    thresholds: StageThresholds,
) -> Result<StageReport, DiagnosticsError> {
    let n = trajectory.times.len();
    if n < 2 {
        return Err(DiagnosticsError::TooFewSamples { len: n });
    }
    let times = &trajectory.times;

    let inter_vel: Vec<f64> = trajectory
        .states
        .iter()
        .map(|s| min_inter_velocity_dist(s, params))
        .collect();
    let inter_dist: Vec<f64> = trajectory.frames.iter().map(|f| f.min_inter_dist).collect();
    let m2_hat: Vec<f64> = trajectory.frames.iter().map(|f| f.m2_hat).collect();

    let vel_ok: Vec<bool> = inter_vel.iter().map(|&q| q >= thresholds.eps_v).collect();
    let dist_ok: Vec<bool> = inter_dist.iter().map(|&q| q >= thresholds.eps_x).collect();
    let flock_ok: Vec<bool> = m2_hat.iter().map(|&q| q <= thresholds.eps_f).collect();

    let t_velocity_sep =
        persistent_onset(&vel_ok).map(|k| crossing_time(times, &inter_vel, k, thresholds.eps_v));
    let t_spatial_sep =
        persistent_onset(&dist_ok).map(|k| crossing_time(times, &inter_dist, k, thresholds.eps_x));
    let t_flock =
        persistent_onset(&flock_ok).map(|k| crossing_time(times, &m2_hat, k, thresholds.eps_f));

    Ok(StageReport { t_velocity_sep, t_spatial_sep, t_flock, thresholds })
}

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Index of the first sample inside the final third of the horizon.
pub(crate) fn final_third_start(times: &[f64]) -> usize {
    let t_end = *times.last().unwrap();
    let t_cut = times[0] + 2.0 / 3.0 * (t_end - times[0]);
    times.iter().position(|&t| t >= t_cut).unwrap_or(0)
}

/// Finite-horizon flocking summary for a completed trajectory.
pub fn flocking_report(trajectory: &Trajectory, params: &ModelParams) -> FlockingReport {
    let frames = &trajectory.frames;
    let times = &trajectory.times;
    let last = frames.len() - 1;

    let inter_vel: Vec<f64> = trajectory
        .states
        .iter()
        .map(|s| min_inter_velocity_dist(s, params))
        .collect();

    let start = final_third_start(times);
    let window_t = &times[start..];
    let window_d: Vec<f64> = frames[start..].iter().map(|f| f.min_inter_dist).collect();
    let separation_slope = fit_slope(window_t, &window_d);
    let separation_log_slope = if window_d.iter().all(|&d| d > 0.0) {
        let logs: Vec<f64> = window_d.iter().map(|&d| libm::log(d)).collect();
        Some(fit_slope(window_t, &logs))
    } else {
        None
    };

    FlockingReport {
        sup_dx: frames.iter().map(|f| f.dx).fold(0.0, f64::max),
        sup_dy: frames.iter().map(|f| f.dy).fold(0.0, f64::max),
        terminal_dv: frames[last].dv,
        terminal_dw: frames[last].dw,
        terminal_min_inter_vel: inter_vel[last],
        min_min_inter_vel: inter_vel.iter().copied().fold(f64::INFINITY, f64::min),
        terminal_min_inter_dist: frames[last].min_inter_dist,
        separation_slope,
        separation_log_slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightSpec;
    use alloc::vec;

    fn params(n1: usize, n2: usize, dim: usize) -> ModelParams {
        ModelParams {
            n1,
            n2,
            dim,
            kappa_s: 1.0,
            kappa_d: 1.0,
            delta: 0.0,
            psi_s: WeightSpec::power_law(1.0, 0.4),
            psi_d: WeightSpec::power_law(1.0, 0.4),
        }
    }

    #[test]
    fn moments_hand_arithmetic() {
        let p = params(2, 1, 2);
        let state = SystemState {
            x: vec![0.0; 4],
            v: vec![1.0, 0.0, 3.0, 0.0],
            y: vec![0.0; 2],
            w: vec![0.0, 0.0],
        };
        let m = moments(&state, &p);
        assert_eq!(m.m1_v, vec![2.0, 0.0]);
        assert_eq!(m.m2_v, 5.0);
        assert_eq!(m.m2, 5.0);
    }

    #[test]
    fn moments_zero_and_unit_speeds() {
        let p = params(1, 1, 1);
        let zero = SystemState::zeros(1, 1, 1);
        let m = moments(&zero, &p);
        assert_eq!((m.m2_v, m.m2_w, m.m2), (0.0, 0.0, 0.0));
        let units = SystemState { x: vec![0.0], v: vec![1.0], y: vec![0.0], w: vec![-1.0] };
        assert_eq!(moments(&units, &p).m2, 2.0);
    }

    #[test]
    fn micro_macro_hand_arithmetic_and_reconstruction() {
        let p = params(2, 1, 2);
        let state = SystemState {
            x: vec![0.5, 0.5, 1.5, 2.5],
            v: vec![1.0, 0.0, 3.0, 0.0],
            y: vec![0.0; 2],
            w: vec![0.0; 2],
        };
        let mm = micro_macro(&state, &p);
        assert_eq!(mm.vc, vec![2.0, 0.0]);
        assert_eq!(mm.v_hat, vec![-1.0, 0.0, 1.0, 0.0]);
        for k in 0..4 {
            assert_eq!(mm.xc[k % 2] + mm.x_hat[k], state.x[k]);
        }
    }

    #[test]
    fn micro_macro_translation_shifts_only_the_mean() {
        let p = params(3, 1, 1);
        let state = SystemState {
            x: vec![0.0, 1.0, 2.0],
            v: vec![0.25, -0.5, 1.75],
            y: vec![0.0],
            w: vec![0.0],
        };
        let base = micro_macro(&state, &p);
        let mut shifted = state.clone();
        for c in &mut shifted.v {
            *c += 10.0;
        }
        let moved = micro_macro(&shifted, &p);
        assert!((moved.vc[0] - base.vc[0] - 10.0).abs() < 1e-12);
        for (a, b) in moved.v_hat.iter().zip(&base.v_hat) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fluctuation_energy_examples() {
        let p = params(2, 1, 2);
        let state = SystemState {
            x: vec![0.0; 4],
            v: vec![1.0, 0.0, 3.0, 0.0],
            y: vec![0.0; 2],
            w: vec![7.0, -2.0],
        };
        // Fluctuations are (+-1, 0) in group 1 and zero in the singleton
        // group regardless of w.
        assert!((fluctuation_energy(&state, &p) - 1.0).abs() < 1e-15);
        // Identity M2(V) = M2(V_hat) + |vc|^2 per group.
        let m = moments(&state, &p);
        let mm = micro_macro(&state, &p);
        let vc2: f64 = mm.vc.iter().map(|c| c * c).sum();
        let hat_v: f64 = mm.v_hat.iter().map(|c| c * c).sum::<f64>() / 2.0;
        assert!((m.m2_v - (hat_v + vc2)).abs() <= 1e-12 * m.m2_v.max(1.0));
    }

    #[test]
    fn diameters_three_four_five() {
        let p = params(2, 1, 2);
        let state = SystemState {
            x: vec![0.0, 0.0, 3.0, 4.0],
            v: vec![0.0; 4],
            y: vec![9.0, 9.0],
            w: vec![0.0; 2],
        };
        let d = diameters(&state, &p);
        assert_eq!(d.dx, 5.0);
        assert_eq!(d.dy, 0.0); // single particle
        assert_eq!(d.dv, 0.0);
    }

    #[test]
    fn extremes_monotone_weight_evaluation() {
        let p = ModelParams {
            psi_d: WeightSpec::exponential(1.0, 2.0),
            ..params(2, 2, 1)
        };
        let state = SystemState {
            x: vec![0.0, 1.0],
            v: vec![0.0; 2],
            y: vec![3.0, 5.0],
            w: vec![0.0; 2],
        };
        let e = inter_group_extremes(&state, &p);
        assert_eq!(e.min_inter_dist, 2.0); // x=1 to y=3
        assert_eq!(e.max_inter_dist, 5.0); // x=0 to y=5
        assert!((e.psi_d_upper - libm::exp(-4.0)).abs() < 1e-15);
        assert!((e.psi_d_lower - libm::exp(-10.0)).abs() < 1e-18);
        assert!(e.psi_d_lower <= e.psi_d_upper);
        assert!(e.psi_s_lower <= e.psi_s_upper);
        // Constant weights degenerate to the amplitude on both sides.
        let pc = ModelParams {
            psi_s: WeightSpec::constant(2.0),
            psi_d: WeightSpec::constant(2.0),
            ..p
        };
        let ec = inter_group_extremes(&state, &pc);
        assert_eq!((ec.psi_s_lower, ec.psi_s_upper), (2.0, 2.0));
        assert_eq!((ec.psi_d_lower, ec.psi_d_upper), (2.0, 2.0));
    }

    #[test]
    fn fit_slope_recovers_linear_coefficients() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        assert!((fit_slope(&xs, &ys) - 3.0).abs() < 1e-12);
        assert_eq!(fit_slope(&[1.0, 1.0], &[0.0, 5.0]), 0.0);
    }

    #[test]
    fn persistent_onset_scans_from_the_back() {
        assert_eq!(persistent_onset(&[false, false, true, true]), Some(2));
        assert_eq!(persistent_onset(&[true, true]), Some(0));
        assert_eq!(persistent_onset(&[true, false, true]), Some(2));
        assert_eq!(persistent_onset(&[true, false]), None);
    }

    #[test]
    fn crossing_time_interpolates_linearly() {
        let times = [0.0, 1.0, 2.0];
        let q = [0.0, 0.0, 1.0];
        // Crosses 0.25 a quarter of the way through [1, 2].
        assert!((crossing_time(&times, &q, 2, 0.25) - 1.25).abs() < 1e-12);
        assert_eq!(crossing_time(&times, &q, 0, 0.25), 0.0);
    }
}
