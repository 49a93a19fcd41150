//! Fixed-step classical Runge-Kutta 4 integration and trajectory recording.
//!
//! No adaptivity: a uniform grid keeps the certificate monitors' time grids
//! regular and the runs bit-reproducible. Diagnostics are computed on
//! sampled states only, so the O(N^2) frame cost stays bounded by the
//! sampling stride rather than the step count.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::diagnostics::{self, DiagnosticsFrame};
use crate::model::{self, ModelError, ModelParams, StateDerivative, SystemState};

/// A full simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub initial: SystemState,
    /// Fixed step size, > 0.
    pub dt: f64,
    /// Horizon; the final step is shortened to land exactly on it.
    pub t_end: f64,
    /// Record every k-th step (plus t = 0 and t = t_end).
    pub sample_stride: usize,
}

/// Recorded samples of one run: strictly increasing times starting at 0,
/// with a state and a diagnostics frame per sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SystemState>,
    pub frames: Vec<DiagnosticsFrame>,
}

impl Trajectory {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Result of [`convergence_order`]: "exact" when every probe error is zero
/// (fixed-point configurations), otherwise the fitted order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    Exact,
    Estimated(f64),
}

impl ConvergenceOrder {
    pub fn value(&self) -> Option<f64> {
        match self {
            ConvergenceOrder::Exact => None,
            ConvergenceOrder::Estimated(p) => Some(*p),
        }
    }
}

/// Errors from integration.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegratorError {
    /// Propagated structural error from the model layer.
    Model(ModelError),
    /// Ill-formed configuration (step size, horizon, parameters, probe set).
    InvalidConfig(String),
    /// A step produced a non-finite coordinate at time `t`. `partial` holds
    /// everything recorded before the failure (empty for a bare step).
    Diverged { t: f64, partial: Trajectory },
}

impl fmt::Display for IntegratorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegratorError::Model(e) => write!(f, "{e}"),
            IntegratorError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            IntegratorError::Diverged { t, .. } => {
                write!(f, "state diverged (non-finite coordinate) at t = {t}")
            }
        }
    }
}

impl From<ModelError> for IntegratorError {
    fn from(e: ModelError) -> Self {
        IntegratorError::Model(e)
    }
}

/// Shortened final steps below this width are skipped: the previous step
/// already landed on the horizon to working precision.
const MIN_PARTIAL_STEP: f64 = 1e-12;

struct Buffers {
    k1: StateDerivative,
    k2: StateDerivative,
    k3: StateDerivative,
    k4: StateDerivative,
    stage: SystemState,
}

impl Buffers {
    fn new(params: &ModelParams) -> Self {
        let (n1, n2, dim) = (params.n1, params.n2, params.dim);
        Buffers {
            k1: StateDerivative::zeros(n1, n2, dim),
            k2: StateDerivative::zeros(n1, n2, dim),
            k3: StateDerivative::zeros(n1, n2, dim),
            k4: StateDerivative::zeros(n1, n2, dim),
            stage: SystemState::zeros(n1, n2, dim),
        }
    }
}

fn stage_slice(base: &[f64], k: &[f64], h: f64, out: &mut [f64]) {
    for ((o, b), d) in out.iter_mut().zip(base).zip(k) {
        *o = b + h * d;
    }
}

fn stage_state(base: &SystemState, k: &StateDerivative, h: f64, out: &mut SystemState) {
    stage_slice(&base.x, &k.dx, h, &mut out.x);
    stage_slice(&base.v, &k.dv, h, &mut out.v);
    stage_slice(&base.y, &k.dy, h, &mut out.y);
    stage_slice(&base.w, &k.dw, h, &mut out.w);
}

fn combine_slice(dst: &mut [f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64], h: f64) {
    let c = h / 6.0;
    for i in 0..dst.len() {
        dst[i] += c * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
}

/// One classical RK4 step of width `h`, in place.
fn rk4_step_buffered(state: &mut SystemState, params: &ModelParams, h: f64, b: &mut Buffers) {
    model::rhs_into(state, params, &mut b.k1);
    stage_state(state, &b.k1, 0.5 * h, &mut b.stage);
    model::rhs_into(&b.stage, params, &mut b.k2);
    stage_state(state, &b.k2, 0.5 * h, &mut b.stage);
    model::rhs_into(&b.stage, params, &mut b.k3);
    stage_state(state, &b.k3, h, &mut b.stage);
    model::rhs_into(&b.stage, params, &mut b.k4);
    combine_slice(&mut state.x, &b.k1.dx, &b.k2.dx, &b.k3.dx, &b.k4.dx, h);
    combine_slice(&mut state.v, &b.k1.dv, &b.k2.dv, &b.k3.dv, &b.k4.dv, h);
    combine_slice(&mut state.y, &b.k1.dy, &b.k2.dy, &b.k3.dy, &b.k4.dy, h);
    combine_slice(&mut state.w, &b.k1.dw, &b.k2.dw, &b.k3.dw, &b.k4.dw, h);
}

/// One classical RK4 step. Deterministic; returns a divergence error when
/// the update produces a non-finite coordinate.
pub fn rk4_step(
    state: &SystemState,
    params: &ModelParams,
    dt: f64,
) -> Result<SystemState, IntegratorError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(IntegratorError::InvalidConfig(format!("dt must be positive, got {dt}")));
    }
    state.validate_shape(params)?;
    let mut next = state.clone();
    let mut buffers = Buffers::new(params);
    rk4_step_buffered(&mut next, params, dt, &mut buffers);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(IntegratorError::Diverged { t: dt, partial: Trajectory::empty() })
    }
}

fn validate_config(config: &SimConfig) -> Result<(), IntegratorError> {
    let violations = config.params.validate();
    if !violations.is_empty() {
        return Err(IntegratorError::InvalidConfig(violations.join("; ")));
    }
    config.initial.validate_shape(&config.params)?;
    if !config.initial.is_finite() {
        return Err(IntegratorError::InvalidConfig(String::from(
            "initial state contains non-finite coordinates",
        )));
    }
    if !(config.dt > 0.0) || !config.dt.is_finite() {
        return Err(IntegratorError::InvalidConfig(format!("dt must be positive, got {}", config.dt)));
    }
    if !(config.t_end >= config.dt) || !config.t_end.is_finite() {
        return Err(IntegratorError::InvalidConfig(format!(
            "t_end must be at least dt, got t_end = {}, dt = {}",
            config.t_end, config.dt
        )));
    }
    if config.sample_stride < 1 {
        return Err(IntegratorError::InvalidConfig(String::from("sample_stride must be >= 1")));
    }
    Ok(())
}

/// Integrate from t = 0 to `t_end`, recording a sample every
/// `sample_stride` steps and always at t = 0 and t = `t_end`.
///
/// The final step is shortened (never extended) to land exactly on the
/// horizon. Any non-finite coordinate aborts with the partial trajectory
/// attached, since repulsion-dominated runs genuinely blow up in velocity.
pub fn simulate(config: &SimConfig) -> Result<Trajectory, IntegratorError> {
    validate_config(config)?;
    let params = &config.params;
    let dt = config.dt;

    // Number of full-width steps; tolerate floating-point shortfall when
    // t_end is an exact multiple of dt.
    let ratio = config.t_end / dt;
    let mut n_full = libm::floor(ratio) as u64;
    if ratio - libm::floor(ratio) > 1.0 - 1e-9 {
        n_full += 1;
    }
    let remainder = config.t_end - n_full as f64 * dt;
    let take_partial = remainder > MIN_PARTIAL_STEP;

    let mut trajectory = Trajectory::empty();
    let mut state = config.initial.clone();
    let mut buffers = Buffers::new(params);

    let record = |traj: &mut Trajectory, t: f64, s: &SystemState| {
        traj.times.push(t);
        traj.states.push(s.clone());
        traj.frames.push(DiagnosticsFrame::compute(s, params));
    };

    record(&mut trajectory, 0.0, &state);

    for k in 1..=n_full {
        rk4_step_buffered(&mut state, params, dt, &mut buffers);
        let is_final = k == n_full && !take_partial;
        let t = if is_final { config.t_end } else { k as f64 * dt };
        if !state.is_finite() {
            return Err(IntegratorError::Diverged { t, partial: trajectory });
        }
        if k % config.sample_stride as u64 == 0 || is_final {
            record(&mut trajectory, t, &state);
        }
    }

    if take_partial {
        rk4_step_buffered(&mut state, params, remainder, &mut buffers);
        if !state.is_finite() {
            return Err(IntegratorError::Diverged { t: config.t_end, partial: trajectory });
        }
        record(&mut trajectory, config.t_end, &state);
    }

    Ok(trajectory)
}

fn state_error(a: &SystemState, b: &SystemState) -> f64 {
    let mut sum = 0.0;
    for (xs, ys) in [(&a.x, &b.x), (&a.v, &b.v), (&a.y, &b.y), (&a.w, &b.w)] {
        for (p, q) in xs.iter().zip(ys.iter()) {
            let d = p - q;
            sum += d * d;
        }
    }
    libm::sqrt(sum)
}

/// Estimate the integrator's convergence order against an exact solution.
///
/// Runs the configuration at each step size, measures the end-time error
/// against `oracle(t_end)`, and returns the least-squares slope of
/// log(error) vs log(dt). Probe step sizes must halve (at least three of
/// them). All-zero errors (fixed points) are reported as
/// [`ConvergenceOrder::Exact`].
pub fn convergence_order(
    config: &SimConfig,
    dts: &[f64],
    oracle: impl Fn(f64) -> SystemState,
) -> Result<ConvergenceOrder, IntegratorError> {
    if dts.len() < 3 {
        return Err(IntegratorError::InvalidConfig(format!(
            "convergence_order needs at least 3 step sizes, got {}",
            dts.len()
        )));
    }
    for pair in dts.windows(2) {
        if !(pair[1] > 0.0) || libm::fabs(pair[1] / pair[0] - 0.5) > 1e-9 {
            return Err(IntegratorError::InvalidConfig(format!(
                "step sizes must halve: {} does not halve {}",
                pair[1], pair[0]
            )));
        }
    }
    let exact = oracle(config.t_end);
    exact
        .validate_shape(&config.params)
        .map_err(|e| IntegratorError::InvalidConfig(format!("oracle shape mismatch: {e}")))?;

    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let probe = SimConfig { dt, sample_stride: usize::MAX, ..config.clone() };
        let trajectory = simulate(&probe)?;
        errors.push(state_error(trajectory.states.last().unwrap(), &exact));
    }

    if errors.iter().all(|&e| e == 0.0) {
        return Ok(ConvergenceOrder::Exact);
    }
    if errors.iter().any(|&e| e == 0.0) {
        return Err(IntegratorError::InvalidConfig(String::from(
            "degenerate error sequence: some probes are exact, others are not",
        )));
    }
    let log_dt: Vec<f64> = dts.iter().map(|&h| libm::log(h)).collect();
    let log_err: Vec<f64> = errors.iter().map(|&e| libm::log(e)).collect();
    Ok(ConvergenceOrder::Estimated(diagnostics::fit_slope(&log_dt, &log_err)))
}
