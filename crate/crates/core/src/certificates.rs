//! Trajectory certificates: numerical verification of the analytic
//! hypotheses, decay envelopes, and Gronwall-type bounds that back the
//! model's flocking and separation guarantees.
//!
//! Everything here is sampled verification on a recorded trajectory, not
//! interval arithmetic: sup/inf over continuous time are approximated by
//! sampled extremes, and each check carries an explicit tolerance for the
//! O(dt) sampling error. A checker never reports `Holds` when the sampled
//! inequality fails beyond tolerance at any sample.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::diagnostics::{final_third_start, fit_slope, DiagnosticsFrame};
use crate::integrator::Trajectory;
use crate::model::{ModelParams, SystemState, WeightKind};
use crate::oracles::riccati_upper_bound;
use crate::quadrature::{weight_integral, weight_integral_to_inf};

/// Outcome of one certificate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum CertStatus {
    Holds,
    Violated,
    NotApplicable,
}

/// One verified (or falsified) inequality family, with the worst signed
/// slack observed, the sample time where it occurred, and the fitted
/// constants that went into the check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CertificateResult {
    pub name: String,
    pub status: CertStatus,
    /// Signed worst-case slack; positive means the checked inequalities
    /// hold. Components may mix units (rates vs normalized envelope
    /// slack); the sign and the per-component details are the contract.
    pub margin: f64,
    /// Time of the worst slack. Always present when `status` is
    /// `Violated`; `None` for `NotApplicable`.
    pub witness_time: Option<f64>,
    pub details: BTreeMap<String, f64>,
}

impl CertificateResult {
    fn not_applicable(name: &str) -> Self {
        CertificateResult {
            name: name.to_string(),
            status: CertStatus::NotApplicable,
            margin: 0.0,
            witness_time: None,
            details: BTreeMap::new(),
        }
    }
}

/// Errors from sampled-function utilities and Gronwall checkers.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateError {
    MismatchedLengths { times: usize, values: usize },
    EmptyFunction,
    NonMonotoneTimes { index: usize },
    OutOfRange { t: f64, lo: f64, hi: f64 },
    NonPositiveRate { alpha: f64 },
    NegativeSamples { which: &'static str },
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::MismatchedLengths { times, values } => {
                write!(f, "sampled function has {times} times but {values} values")
            }
            CertificateError::EmptyFunction => write!(f, "sampled function has no samples"),
            CertificateError::NonMonotoneTimes { index } => {
                write!(f, "sample times must be strictly increasing (violated at index {index})")
            }
            CertificateError::OutOfRange { t, lo, hi } => {
                write!(f, "time {t} is outside the sampled range [{lo}, {hi}]")
            }
            CertificateError::NonPositiveRate { alpha } => {
                write!(f, "decay rate must be positive, got {alpha}")
            }
            CertificateError::NegativeSamples { which } => {
                write!(f, "{which} must be nonnegative at every sample")
            }
        }
    }
}

/// A scalar function known at strictly increasing sample times, evaluated
/// between samples by linear interpolation.
#[derive(Debug, Clone, Copy)]
pub struct Sampled<'a> {
    times: &'a [f64],
    values: &'a [f64],
}

impl<'a> Sampled<'a> {
    pub fn new(times: &'a [f64], values: &'a [f64]) -> Result<Self, CertificateError> {
        if times.len() != values.len() {
            return Err(CertificateError::MismatchedLengths {
                times: times.len(),
                values: values.len(),
            });
        }
        if times.is_empty() {
            return Err(CertificateError::EmptyFunction);
        }
        for (i, pair) in times.windows(2).enumerate() {
            if !(pair[1] > pair[0]) {
                return Err(CertificateError::NonMonotoneTimes { index: i + 1 });
            }
        }
        Ok(Sampled { times, values })
    }

    pub fn times(&self) -> &[f64] {
        self.times
    }

    pub fn values(&self) -> &[f64] {
        self.values
    }

    fn check_range(&self, t: f64) -> Result<(), CertificateError> {
        let lo = self.times[0];
        let hi = *self.times.last().unwrap();
        if t < lo || t > hi || !t.is_finite() {
            return Err(CertificateError::OutOfRange { t, lo, hi });
        }
        Ok(())
    }

    /// Linear interpolation at `t`; errors outside the sampled range.
    pub fn value_at(&self, t: f64) -> Result<f64, CertificateError> {
        self.check_range(t)?;
        let idx = match self.times.iter().position(|&s| s >= t) {
            Some(i) => i,
            None => self.times.len() - 1,
        };
        if self.times[idx] == t || idx == 0 {
            return Ok(self.values[idx]);
        }
        let (t0, t1) = (self.times[idx - 1], self.times[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        let frac = (t - t0) / (t1 - t0);
        Ok(v0 + frac * (v1 - v0))
    }

    /// Maximum of |value| over `[a, b]`. Exact for the piecewise-linear
    /// interpolant: the extreme sits at a sample or an interval endpoint.
    pub fn max_abs_on(&self, a: f64, b: f64) -> Result<f64, CertificateError> {
        if !(a <= b) {
            return Err(CertificateError::OutOfRange {
                t: a,
                lo: self.times[0],
                hi: *self.times.last().unwrap(),
            });
        }
        let mut best = libm::fabs(self.value_at(a)?);
        let vb = libm::fabs(self.value_at(b)?);
        if vb > best {
            best = vb;
        }
        for (&t, &v) in self.times.iter().zip(self.values) {
            if t > a && t < b && libm::fabs(v) > best {
                best = libm::fabs(v);
            }
        }
        Ok(best)
    }

    /// Trapezoidal quadrature of |samples| over the full range. Exact for
    /// the interpolant only where it keeps one sign; the certificate
    /// inputs are nonnegative, where this is the plain trapezoid rule.
    pub fn l1_norm(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.times.len() {
            let dt = self.times[i] - self.times[i - 1];
            total += 0.5 * (libm::fabs(self.values[i]) + libm::fabs(self.values[i - 1])) * dt;
        }
        total
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

// ---------------------------------------------------------------------------
// Gronwall-type bounds
// ---------------------------------------------------------------------------

/// Upper bound at time `t` for `y' <= -alpha*y + f` with decaying forcing:
/// `(1/a)*max_{[t/2,t]}|f| + y(0)e^{-at} + (sup|f|/a)e^{-at/2}`.
pub fn gronwall_decay_bound(
    y: &Sampled<'_>,
    alpha: f64,
    f: &Sampled<'_>,
    t: f64,
) -> Result<f64, CertificateError> {
    if !(alpha > 0.0) {
        return Err(CertificateError::NonPositiveRate { alpha });
    }
    let y0 = y.value_at(y.times[0])?;
    let f_window = f.max_abs_on(0.5 * t, t)?;
    let f_sup = f.max_abs_on(f.times[0], t)?;
    Ok(f_window / alpha + y0 * libm::exp(-alpha * t) + f_sup / alpha * libm::exp(-0.5 * alpha * t))
}

/// Signed slack `bound - y(t)` for [`gronwall_decay_bound`]; nonnegative
/// when the bound holds.
pub fn gronwall_decay_check(
    y: &Sampled<'_>,
    alpha: f64,
    f: &Sampled<'_>,
    t: f64,
) -> Result<f64, CertificateError> {
    Ok(gronwall_decay_bound(y, alpha, f, t)? - y.value_at(t)?)
}

/// Lower bound at time `t` for `y' >= alpha*y - f`:
/// `(y0 - sup|f|/a)e^{at} + ((sup|f| - max_{[t/2,t]}|f|)/a)e^{at/2}
///  + (1/a)*max_{[t/2,t]}|f|`.
///
/// Follows from bounding the forcing integral by `sup|f|` on `[0, t/2]`
/// and by the window maximum on `[t/2, t]`; constant forcing saturates the
/// bound exactly.
pub fn gronwall_lower_bound(
    y: &Sampled<'_>,
    alpha: f64,
    f: &Sampled<'_>,
    t: f64,
) -> Result<f64, CertificateError> {
    if !(alpha > 0.0) {
        return Err(CertificateError::NonPositiveRate { alpha });
    }
    let y0 = y.value_at(y.times[0])?;
    let f_window = f.max_abs_on(0.5 * t, t)?;
    let f_sup = f.max_abs_on(f.times[0], t)?;
    Ok((y0 - f_sup / alpha) * libm::exp(alpha * t)
        + (f_sup - f_window) / alpha * libm::exp(0.5 * alpha * t)
        + f_window / alpha)
}

/// Signed slack `y(t) - bound` for [`gronwall_lower_bound`].
pub fn gronwall_lower_check(
    y: &Sampled<'_>,
    alpha: f64,
    f: &Sampled<'_>,
    t: f64,
) -> Result<f64, CertificateError> {
    Ok(y.value_at(t)? - gronwall_lower_bound(y, alpha, f, t)?)
}

/// Uniform upper bound for `y' <= alpha(t)y + f(t)` with integrable
/// nonnegative coefficients: `(y0 + ||f||_L1) e^{||alpha||_L1}`.
pub fn gronwall_integrable_upper(
    y: &Sampled<'_>,
    alpha: &Sampled<'_>,
    f: &Sampled<'_>,
) -> Result<f64, CertificateError> {
    if alpha.values.iter().any(|&a| a < 0.0) {
        return Err(CertificateError::NegativeSamples { which: "alpha" });
    }
    if f.values.iter().any(|&v| v < 0.0) {
        return Err(CertificateError::NegativeSamples { which: "f" });
    }
    Ok((y.values[0] + f.l1_norm()) * libm::exp(alpha.l1_norm()))
}

/// Signed slack `bound - sup y` for [`gronwall_integrable_upper`].
pub fn gronwall_integrable_upper_check(
    y: &Sampled<'_>,
    alpha: &Sampled<'_>,
    f: &Sampled<'_>,
) -> Result<f64, CertificateError> {
    Ok(gronwall_integrable_upper(y, alpha, f)? - y.sup())
}

/// Uniform lower bound for `y' >= -alpha(t)y - f(t)` with integrable
/// nonnegative coefficients: `y0 - ||f||_L1 e^{||alpha||_L1}`.
pub fn gronwall_integrable_lower(
    y: &Sampled<'_>,
    alpha: &Sampled<'_>,
    f: &Sampled<'_>,
) -> Result<f64, CertificateError> {
    if alpha.values.iter().any(|&a| a < 0.0) {
        return Err(CertificateError::NegativeSamples { which: "alpha" });
    }
    if f.values.iter().any(|&v| v < 0.0) {
        return Err(CertificateError::NegativeSamples { which: "f" });
    }
    Ok(y.values[0] - f.l1_norm() * libm::exp(alpha.l1_norm()))
}

/// Signed slack `inf y - bound` for [`gronwall_integrable_lower`].
pub fn gronwall_integrable_lower_check(
    y: &Sampled<'_>,
    alpha: &Sampled<'_>,
    f: &Sampled<'_>,
) -> Result<f64, CertificateError> {
    Ok(y.inf() - gronwall_integrable_lower(y, alpha, f)?)
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Tracks the worst signed slack and the sample time where it occurred.
struct Worst {
    slack: f64,
    time: Option<f64>,
}

impl Worst {
    fn new() -> Self {
        Worst { slack: f64::INFINITY, time: None }
    }

    fn update(&mut self, slack: f64, time: f64) {
        if slack < self.slack {
            self.slack = slack;
            self.time = Some(time);
        }
    }

    fn merge(&mut self, slack: f64, time: Option<f64>) {
        if slack < self.slack {
            self.slack = slack;
            self.time = time;
        }
    }
}

/// Clamp a nonnegative margin to strictly negative when a strict
/// inequality failed exactly at the boundary, preserving the
/// `Violated => margin < 0` invariant.
fn violated_margin(margin: f64) -> f64 {
    if margin < 0.0 {
        margin
    } else {
        -f64::MIN_POSITIVE
    }
}

fn applicable_frictionless_constant(params: &ModelParams) -> bool {
    params.psi_d.kind == WeightKind::Constant && params.delta == 0.0
}

/// Checks the initial-data hypotheses of the frictionless
/// constant-repulsion flocking criterion: positive couplings, positive
/// group diameters, separated mean velocities, and — for each group — the
/// strict integral condition that the intra-group weight can absorb the
/// initial velocity spread. Requires the constant-`psi_d`, zero-friction
/// regime; anything else is `NotApplicable`.
pub fn check_theorem31_hypotheses(initial: &SystemState, params: &ModelParams) -> CertificateResult {
    let name = "theorem31_hypotheses";
    if !applicable_frictionless_constant(params) {
        return CertificateResult::not_applicable(name);
    }
    let frame = DiagnosticsFrame::compute(initial, params);
    let mut details = BTreeMap::new();
    details.insert("dx0".to_string(), frame.dx);
    details.insert("dy0".to_string(), frame.dy);
    details.insert("dv0".to_string(), frame.dv);
    details.insert("dw0".to_string(), frame.dw);
    details.insert("center_sep0".to_string(), frame.center_sep);

    let mut min_slack = f64::INFINITY;
    let mut push = |slack: f64| {
        if slack < min_slack {
            min_slack = slack;
        }
    };
    push(params.kappa_s);
    push(params.kappa_d);
    push(frame.dx);
    push(frame.dy);
    push(frame.center_sep);

    // Strict feasibility per group, in velocity units: the full tail
    // integral must exceed the initial spread.
    for (dx0, dv0, radius_key, deficit_key) in [
        (frame.dx, frame.dv, "x_m", "deficit_group1"),
        (frame.dy, frame.dw, "y_m", "deficit_group2"),
    ] {
        let slack = match weight_integral_to_inf(&params.psi_s, dx0) {
            None => f64::INFINITY,
            Some(available) => params.kappa_s * available - dv0,
        };
        push(slack);
        match crate::oracles::flocking_radius(&params.psi_s, params.kappa_s, dx0, dv0) {
            Ok(radius) => {
                details.insert(radius_key.to_string(), radius);
            }
            Err(crate::oracles::OracleError::Infeasible { deficit }) => {
                details.insert(deficit_key.to_string(), deficit);
            }
            Err(_) => {}
        }
    }

    let holds = min_slack > 0.0;
    CertificateResult {
        name: name.to_string(),
        status: if holds { CertStatus::Holds } else { CertStatus::Violated },
        margin: if holds { min_slack } else { violated_margin(min_slack) },
        witness_time: Some(0.0),
        details,
    }
}

/// Tolerances for [`verify_theorem31_conclusions`]: a relative allowance
/// on the decay envelopes (also used as the absolute allowance on the
/// position diameters) and a much tighter one on the exact mean-velocity
/// law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem31Tols {
    pub envelope: f64,
    pub macro_law: f64,
}

impl Default for Theorem31Tols {
    fn default() -> Self {
        Theorem31Tols { envelope: 1e-2, macro_law: 1e-6 }
    }
}

/// Verifies the conclusions of the frictionless constant-repulsion
/// flocking criterion along a trajectory with default tolerances: bounded
/// group diameters (`dx <= x_m`, `dy <= y_m`), exponential velocity-spread
/// decay at the rates implied by the radii, and the exact exponential law
/// for the mean-velocity separation.
pub fn verify_theorem31_conclusions(
    trajectory: &Trajectory,
    params: &ModelParams,
    x_m: f64,
    y_m: f64,
) -> CertificateResult {
    verify_theorem31_conclusions_with(trajectory, params, x_m, y_m, &Theorem31Tols::default())
}

/// [`verify_theorem31_conclusions`] with explicit tolerances.
pub fn verify_theorem31_conclusions_with(
    trajectory: &Trajectory,
    params: &ModelParams,
    x_m: f64,
    y_m: f64,
    tols: &Theorem31Tols,
) -> CertificateResult {
    let name = "theorem31_conclusions";
    if !applicable_frictionless_constant(params) || trajectory.frames.is_empty() {
        return CertificateResult::not_applicable(name);
    }
    let frames = &trajectory.frames;
    let times = &trajectory.times;
    let dv0 = frames[0].dv;
    let dw0 = frames[0].dw;
    let sep0 = frames[0].center_sep;
    let rate_v = params.kappa_s * params.psi_s.eval_unchecked(x_m);
    let rate_w = params.kappa_s * params.psi_s.eval_unchecked(y_m);
    // Constant inter-group weight: its amplitude folds into the effective
    // repulsion rate of the mean-velocity law.
    let growth_rate = 2.0 * params.kappa_d * params.psi_d.amplitude;

    let mut worst = Worst::new();
    let mut worst_position = f64::INFINITY;
    let mut worst_velocity = f64::INFINITY;
    let mut worst_macro = f64::INFINITY;

    // Absolute floor so exactly-zero spreads compare cleanly against
    // exactly-zero envelopes.
    let floor = 1e-12;
    for (&t, frame) in times.iter().zip(frames) {
        let slack_x = (x_m + tols.envelope - frame.dx) / f64::max(1.0, x_m);
        let slack_y = (y_m + tols.envelope - frame.dy) / f64::max(1.0, y_m);
        worst.update(slack_x, t);
        worst.update(slack_y, t);
        worst_position = worst_position.min(slack_x).min(slack_y);

        let env_v = dv0 * libm::exp(-rate_v * t);
        let env_w = dw0 * libm::exp(-rate_w * t);
        let slack_v = (env_v * (1.0 + tols.envelope) + floor - frame.dv) / f64::max(dv0, floor);
        let slack_w = (env_w * (1.0 + tols.envelope) + floor - frame.dw) / f64::max(dw0, floor);
        worst.update(slack_v, t);
        worst.update(slack_w, t);
        worst_velocity = worst_velocity.min(slack_v).min(slack_w);

        if sep0 > 0.0 {
            let expected = sep0 * libm::exp(growth_rate * t);
            let rel = libm::fabs(frame.center_sep - expected) / expected;
            let slack_m = 1.0 - rel / tols.macro_law;
            worst.update(slack_m, t);
            worst_macro = worst_macro.min(slack_m);
        }
    }

    let mut details = BTreeMap::new();
    details.insert("x_m".to_string(), x_m);
    details.insert("y_m".to_string(), y_m);
    details.insert("decay_rate_v".to_string(), rate_v);
    details.insert("decay_rate_w".to_string(), rate_w);
    details.insert("center_sep0".to_string(), sep0);
    details.insert("worst_position_slack".to_string(), worst_position);
    details.insert("worst_velocity_slack".to_string(), worst_velocity);
    if worst_macro.is_finite() {
        details.insert("worst_macro_slack".to_string(), worst_macro);
    }

    let holds = worst.slack >= 0.0;
    CertificateResult {
        name: name.to_string(),
        status: if holds { CertStatus::Holds } else { CertStatus::Violated },
        margin: worst.slack,
        witness_time: worst.time,
        details,
    }
}

/// Caller-tunable constants for [`monitor_theorem41`]: the two decay
/// slack exponents (existential constants in the analysis, fixed here by
/// choice) used in fitting `c0` and the separation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem41Options {
    pub eps0: f64,
    pub eps0_tilde: f64,
}

impl Default for Theorem41Options {
    fn default() -> Self {
        Theorem41Options { eps0: 0.5, eps0_tilde: 0.5 }
    }
}

/// Log-domain value of the observed inter-group weight at one sample,
/// floored to keep underflowed weights from producing -inf.
fn log_floored(v: f64) -> f64 {
    libm::log(f64::max(v, 1e-300))
}

/// Monitors the frictionless decaying-repulsion regime with default
/// slack exponents; see [`monitor_theorem41_with`].
pub fn monitor_theorem41(trajectory: &Trajectory, params: &ModelParams) -> CertificateResult {
    monitor_theorem41_with(trajectory, params, &Theorem41Options::default())
}

/// Monitors the frictionless regime in which repulsion must decay fast
/// enough for the groups to align internally while their mean velocities
/// stay separated. Fits the decay constant `c0`, checks that the observed
/// inter-group weight genuinely decays at the required exponential rate
/// (log-slope over the final third must be negative), verifies the
/// fluctuation-energy envelope with rate constants `eta0`/`c1`, the
/// uniform mean-separation bound `c2`, and assembles the separation
/// constants `c3`..`c5`.
pub fn monitor_theorem41_with(
    trajectory: &Trajectory,
    params: &ModelParams,
    opts: &Theorem41Options,
) -> CertificateResult {
    let name = "theorem41_monitor";
    if params.delta != 0.0 || trajectory.frames.len() < 2 {
        return CertificateResult::not_applicable(name);
    }
    let frames = &trajectory.frames;
    let times = &trajectory.times;
    let ks = params.kappa_s;
    let kd = params.kappa_d;
    let psid_inf = params.psi_d.amplitude;

    let mut worst = Worst::new();
    let mut details = BTreeMap::new();

    // (a) Uniform alignment-dominance rate.
    let mut eta0 = f64::INFINITY;
    let mut eta0_time = 0.0;
    for (&t, f) in times.iter().zip(frames) {
        let local = 2.0 * (ks * f.psi_s_lower - kd * f.psi_d_upper);
        if local < eta0 {
            eta0 = local;
            eta0_time = t;
        }
    }
    details.insert("eta0".to_string(), eta0);
    worst.merge(eta0, Some(eta0_time));

    // (b) Smallest c0 with psi_d_upper(t) <= c0 e^{-(2+eps0) kd psid_inf t},
    // plus a falsifiable decay test: the log of the compensated weight
    // must slope downward over the final third of the horizon.
    let lam = (2.0 + opts.eps0) * kd * psid_inf;
    let g_log: Vec<f64> = times
        .iter()
        .zip(frames)
        .map(|(&t, f)| log_floored(f.psi_d_upper) + lam * t)
        .collect();
    let c0 = libm::exp(g_log.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let mut start = final_third_start(times);
    if times.len() - start < 2 {
        start = times.len() - 2;
    }
    let decay_slope = fit_slope(&times[start..], &g_log[start..]);
    details.insert("c0".to_string(), c0);
    details.insert("decay_slope".to_string(), decay_slope);
    let slope_slack = -decay_slope / f64::max(lam, 1e-12);
    worst.merge(slope_slack, Some(times[start]));

    // (c) Fluctuation-energy envelope, defined only when eta0 > 0.
    let m2h0 = frames[0].m2_hat;
    if eta0 > 0.0 {
        let c1 = f64::max(2.0 * c0 * libm::sqrt(2.0 * m2h0) * kd / eta0, libm::sqrt(m2h0));
        details.insert("c1".to_string(), c1);
        let mut env_worst = f64::INFINITY;
        for (&t, f) in times.iter().zip(frames) {
            let env = 3.0
                * c1
                * f64::max(
                    libm::exp(-0.5 * opts.eps0 * kd * psid_inf * t),
                    libm::exp(-0.25 * eta0 * t),
                );
            let val = libm::sqrt(f.m2_hat);
            let slack = if env > 0.0 {
                (env - val) / env
            } else if val <= 0.0 {
                1.0
            } else {
                -1.0
            };
            worst.update(slack, t);
            env_worst = env_worst.min(slack);
        }
        details.insert("envelope_worst_slack".to_string(), env_worst);

        // (d) Uniform bound on the mean-velocity separation.
        let sep0 = frames[0].center_sep;
        let denom = (2.0 + opts.eps0) * psid_inf;
        let c2 = (sep0 + 6.0 * c0 * c1 / denom) * libm::exp(2.0 * c0 / denom);
        details.insert("c2".to_string(), c2);
        let mut sep_worst = f64::INFINITY;
        for (&t, f) in times.iter().zip(frames) {
            let slack = (c2 - f.center_sep) / f64::max(c2, 1e-300);
            worst.update(slack, t);
            sep_worst = sep_worst.min(slack);
        }
        details.insert("separation_worst_slack".to_string(), sep_worst);
    }

    // Separation constants: c0~ for the milder decay exponent, the
    // integrated perturbation budget c4, and the residual separation c5.
    let lam_tilde = opts.eps0_tilde * kd * psid_inf;
    let c0_tilde = times
        .iter()
        .zip(frames)
        .map(|(&t, f)| f.psi_d_upper * libm::exp(lam_tilde * t))
        .fold(f64::NEG_INFINITY, f64::max);
    let c3 = 2.0 * c0_tilde / f64::max(opts.eps0_tilde * psid_inf, 1e-300);
    let forcing: Vec<f64> = frames
        .iter()
        .map(|f| 2.0 * kd * f.psi_d_upper * libm::sqrt(2.0 * f.m2_hat))
        .collect();
    let c4 = Sampled::new(times, &forcing).map(|s| s.l1_norm()).unwrap_or(f64::NAN);
    let c5 = frames[0].center_sep - c4 * libm::exp(c3);
    details.insert("c0_tilde".to_string(), c0_tilde);
    details.insert("c3".to_string(), c3);
    details.insert("c4".to_string(), c4);
    details.insert("c5".to_string(), c5);
    details.insert("eps0".to_string(), opts.eps0);
    details.insert("eps0_tilde".to_string(), opts.eps0_tilde);

    let holds = eta0 > 0.0 && decay_slope < 0.0 && worst.slack >= 0.0;
    CertificateResult {
        name: name.to_string(),
        status: if holds { CertStatus::Holds } else { CertStatus::Violated },
        margin: if holds { worst.slack } else { violated_margin(worst.slack) },
        witness_time: worst.time,
        details,
    }
}

/// Monitors the friction regime in which intra-group alignment outweighs
/// repulsion plus friction: checks the uniform dominance rate `eta1 > 0`
/// and the fluctuation envelope `sqrt(m2_hat) <= c6`, and reports the
/// mean-separation threshold `c7/delta` and the fitted linear growth rate
/// `c8` of the inter-group distance over the final third.
pub fn monitor_theorem51(trajectory: &Trajectory, params: &ModelParams) -> CertificateResult {
    let name = "theorem51_monitor";
    if !(params.delta > 0.0) || trajectory.frames.len() < 2 {
        return CertificateResult::not_applicable(name);
    }
    let frames = &trajectory.frames;
    let times = &trajectory.times;
    let ks = params.kappa_s;
    let kd = params.kappa_d;
    let delta = params.delta;
    let psid_inf = params.psi_d.amplitude;

    let mut worst = Worst::new();
    let mut details = BTreeMap::new();

    let mut eta1 = f64::INFINITY;
    let mut eta1_time = 0.0;
    for (&t, f) in times.iter().zip(frames) {
        let local = ks * f.psi_s_lower - kd * f.psi_d_upper - delta;
        if local < eta1 {
            eta1 = local;
            eta1_time = t;
        }
    }
    details.insert("eta1".to_string(), eta1);
    worst.merge(eta1, Some(eta1_time));

    let m2_inf = match riccati_upper_bound(params, frames[0].m2) {
        Ok(b) => b,
        Err(_) => return CertificateResult::not_applicable(name),
    };
    details.insert("m2_inf".to_string(), m2_inf);

    if eta1 > 0.0 {
        let c6 = f64::max(libm::sqrt(frames[0].m2_hat), 2.0 * kd * psid_inf * libm::sqrt(m2_inf) / eta1);
        details.insert("c6".to_string(), c6);
        // The first sample satisfies the bound by construction of c6;
        // scan the rest for an informative slack.
        let mut env_worst = f64::INFINITY;
        for (&t, f) in times.iter().zip(frames).skip(1) {
            let val = libm::sqrt(f.m2_hat);
            let slack = if c6 > 0.0 {
                (c6 - val) / c6
            } else if val <= 0.0 {
                1.0
            } else {
                -1.0
            };
            worst.update(slack, t);
            env_worst = env_worst.min(slack);
        }
        details.insert("envelope_worst_slack".to_string(), env_worst);

        let n_max = params.n1.max(params.n2) as f64;
        let c7_over_delta =
            (2.0 * kd * psid_inf * c6 + delta * libm::sqrt(n_max) * m2_inf * libm::sqrt(m2_inf))
                / delta;
        details.insert("c7_over_delta".to_string(), c7_over_delta);
        details.insert("center_sep0".to_string(), frames[0].center_sep);
        details.insert(
            "center_threshold_margin".to_string(),
            frames[0].center_sep - c7_over_delta,
        );
    }

    let mut start = final_third_start(times);
    if times.len() - start < 2 {
        start = times.len() - 2;
    }
    let window_d: Vec<f64> = frames[start..].iter().map(|f| f.min_inter_dist).collect();
    let c8 = fit_slope(&times[start..], &window_d);
    details.insert("c8".to_string(), c8);

    let holds = eta1 > 0.0 && worst.slack >= 0.0;
    CertificateResult {
        name: name.to_string(),
        status: if holds { CertStatus::Holds } else { CertStatus::Violated },
        margin: if holds { worst.slack } else { violated_margin(worst.slack) },
        witness_time: worst.time,
        details,
    }
}

/// Verifies the dissipation functionals of the frictionless
/// constant-repulsion regime with the default 1e-2 tolerance; see
/// [`verify_lyapunov_with_tol`].
pub fn verify_lyapunov(trajectory: &Trajectory, params: &ModelParams) -> CertificateResult {
    verify_lyapunov_with_tol(trajectory, params, 1e-2)
}

/// Verifies, per group, the velocity-diameter dissipation inequality
/// `dv(t) + kappa_s * |integral of psi_s from dx(0) to dx(t)| <= dv(0)`
/// and the monotonicity of the functional
/// `dv(t) + kappa_s * integral of psi_s from 0 to dx(t)` along samples,
/// both up to the relative tolerance `tol`.
pub fn verify_lyapunov_with_tol(
    trajectory: &Trajectory,
    params: &ModelParams,
    tol: f64,
) -> CertificateResult {
    let name = "lyapunov_functionals";
    if !applicable_frictionless_constant(params) || trajectory.frames.is_empty() {
        return CertificateResult::not_applicable(name);
    }
    let frames = &trajectory.frames;
    let times = &trajectory.times;
    let ks = params.kappa_s;

    let mut worst = Worst::new();
    let mut details = BTreeMap::new();

    for (spread0, label, spread_of, diam_of) in [
        (
            frames[0].dv,
            "group1",
            (|f: &DiagnosticsFrame| f.dv) as fn(&DiagnosticsFrame) -> f64,
            (|f: &DiagnosticsFrame| f.dx) as fn(&DiagnosticsFrame) -> f64,
        ),
        (frames[0].dw, "group2", |f| f.dw, |f| f.dy),
    ] {
        let diam0 = diam_of(&frames[0]);
        let scale = f64::max(spread0, 1e-12);
        let mut family_worst = f64::INFINITY;

        // Dissipation against the initial spread. The absolute floor keeps
        // rounding-level diameter wobble from failing zero-spread groups.
        let floor = 1e-12;
        for (&t, f) in times.iter().zip(frames) {
            let (lo, hi) = if diam_of(f) >= diam0 { (diam0, diam_of(f)) } else { (diam_of(f), diam0) };
            let absorbed = ks * weight_integral(&params.psi_s, lo, hi);
            let slack = (spread0 * (1.0 + tol) + floor - (spread_of(f) + absorbed)) / scale;
            worst.update(slack, t);
            family_worst = family_worst.min(slack);
        }

        // The functional spread + ks * integral(0..diam) never increases
        // beyond tolerance between consecutive samples.
        let values: Vec<f64> = frames
            .iter()
            .map(|f| spread_of(f) + ks * weight_integral(&params.psi_s, 0.0, diam_of(f)))
            .collect();
        let l_scale = f64::max(values[0], 1e-12);
        for i in 1..values.len() {
            let slack = (values[i - 1] + tol * l_scale - values[i]) / l_scale;
            worst.update(slack, times[i]);
            family_worst = family_worst.min(slack);
        }

        let mut key = String::from("worst_slack_");
        key.push_str(label);
        details.insert(key, family_worst);
    }
    details.insert("dv0".to_string(), frames[0].dv);
    details.insert("dw0".to_string(), frames[0].dw);

    let holds = worst.slack >= 0.0;
    CertificateResult {
        name: name.to_string(),
        status: if holds { CertStatus::Holds } else { CertStatus::Violated },
        margin: worst.slack,
        witness_time: worst.time,
        details,
    }
}
