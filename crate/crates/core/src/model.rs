//! Model definition: interaction weights, parameters, state layout, and the
//! right-hand side of the two-group dynamics.
//!
//! Group 1 carries positions `x` and velocities `v` (sizes `n1 * dim`),
//! group 2 carries `y` and `w` (sizes `n2 * dim`). Each velocity obeys
//!
//! ```text
//! dv_i/dt =  (kappa_s/n1) * sum_k psi_s(|x_k - x_i|) (v_k - v_i)
//!          - (kappa_d/n2) * sum_k psi_d(|y_k - x_i|) (w_k - v_i)
//!          + delta * v_i (1 - |v_i|^2)
//! ```
//!
//! with the symmetric expression (roles of the groups swapped) for `w_j`.
//! The intra-group sum runs over the particle's own group and is attractive;
//! the inter-group sum runs over the full opposite group and enters with a
//! negative sign, so it repels. The optional `delta` term is a Rayleigh-type
//! friction that relaxes each speed towards 1.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Functional form of a communication weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum WeightKind {
    /// `psi(r) = amplitude`.
    Constant,
    /// `psi(r) = amplitude / (1 + r^2)^beta`.
    PowerLaw,
    /// `psi(r) = amplitude * exp(-beta * r)`.
    Exponential,
}

/// A nonnegative, nonincreasing communication weight `psi: [0, inf) -> (0, amplitude]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeightSpec {
    pub kind: WeightKind,
    /// Value at `r = 0`; also the supremum of the weight. Must be positive.
    pub amplitude: f64,
    /// Decay parameter; ignored by `Constant`, must be positive otherwise.
    pub beta: f64,
}

impl WeightSpec {
    pub fn constant(amplitude: f64) -> Self {
        Self { kind: WeightKind::Constant, amplitude, beta: 0.0 }
    }

    pub fn power_law(amplitude: f64, beta: f64) -> Self {
        Self { kind: WeightKind::PowerLaw, amplitude, beta }
    }

    pub fn exponential(amplitude: f64, beta: f64) -> Self {
        Self { kind: WeightKind::Exponential, amplitude, beta }
    }

    /// Evaluate the weight at radius `r >= 0`.
    ///
    /// Returns a domain error for negative or non-finite `r`; distances
    /// produced inside the force loop are norms and skip this check via
    /// [`WeightSpec::eval_unchecked`].
    pub fn eval(&self, r: f64) -> Result<f64, ModelError> {
        if !(r >= 0.0) {
            return Err(ModelError::InvalidRadius { r });
        }
        Ok(self.eval_unchecked(r))
    }

    /// Evaluate at a radius already known to be nonnegative (e.g. a norm).
    #[inline]
    pub fn eval_unchecked(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        match self.kind {
            WeightKind::Constant => self.amplitude,
            WeightKind::PowerLaw => self.amplitude / libm::pow(1.0 + r * r, self.beta),
            WeightKind::Exponential => self.amplitude * libm::exp(-self.beta * r),
        }
    }

    /// Violation messages for an ill-formed weight; empty when valid.
    pub fn validate(&self, label: &str) -> Vec<String> {
        let mut violations = Vec::new();
        if !(self.amplitude > 0.0) || !self.amplitude.is_finite() {
            violations.push(format!("{label}.amplitude must be positive and finite"));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            violations.push(format!("{label}.beta must be nonnegative and finite"));
        }
        if self.kind != WeightKind::Constant && !(self.beta > 0.0) {
            violations.push(format!("{label}.beta must be positive for decaying kinds"));
        }
        violations
    }
}

/// Physical and structural parameters of the two-group system.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModelParams {
    /// Number of agents in group 1 (>= 1).
    pub n1: usize,
    /// Number of agents in group 2 (>= 1).
    pub n2: usize,
    /// Spatial dimension (>= 1).
    pub dim: usize,
    /// Intra-group (attractive) coupling strength, >= 0.
    pub kappa_s: f64,
    /// Inter-group (repulsive) coupling strength, >= 0.
    pub kappa_d: f64,
    /// Rayleigh friction coefficient, >= 0 (0 disables friction).
    pub delta: f64,
    /// Intra-group communication weight.
    pub psi_s: WeightSpec,
    /// Inter-group communication weight.
    pub psi_d: WeightSpec,
}

impl ModelParams {
    /// Collect all parameter violations; an empty list means the parameters
    /// are usable.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        if self.n1 < 1 {
            violations.push(String::from("n1 >= 1"));
        }
        if self.n2 < 1 {
            violations.push(String::from("n2 >= 1"));
        }
        if self.dim < 1 {
            violations.push(String::from("dim >= 1"));
        }
        if !(self.kappa_s >= 0.0) || !self.kappa_s.is_finite() {
            violations.push(String::from("kappa_s >= 0"));
        }
        if !(self.kappa_d >= 0.0) || !self.kappa_d.is_finite() {
            violations.push(String::from("kappa_d >= 0"));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            violations.push(String::from("delta >= 0"));
        }
        violations.extend(self.psi_s.validate("psi_s"));
        violations.extend(self.psi_d.validate("psi_d"));
        violations
    }
}

/// Flat state layout: `x`/`v` hold `n1 * dim` coordinates (agent-major),
/// `y`/`w` hold `n2 * dim`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SystemState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl SystemState {
    pub fn zeros(n1: usize, n2: usize, dim: usize) -> Self {
        Self {
            x: vec![0.0; n1 * dim],
            v: vec![0.0; n1 * dim],
            y: vec![0.0; n2 * dim],
            w: vec![0.0; n2 * dim],
        }
    }

    /// Check that the array lengths match `params`.
    pub fn validate_shape(&self, params: &ModelParams) -> Result<(), ModelError> {
        let checks = [
            ("x", self.x.len(), params.n1 * params.dim),
            ("v", self.v.len(), params.n1 * params.dim),
            ("y", self.y.len(), params.n2 * params.dim),
            ("w", self.w.len(), params.n2 * params.dim),
        ];
        for (field, actual, expected) in checks {
            if actual != expected {
                return Err(ModelError::ShapeMismatch { field, expected, actual });
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.v).chain(&self.y).chain(&self.w).all(|c| c.is_finite())
    }

    /// `self + h * k`, used by the RK4 stages.
    pub fn add_scaled(&self, k: &StateDerivative, h: f64) -> SystemState {
        SystemState {
            x: axpy(&self.x, &k.dx, h),
            v: axpy(&self.v, &k.dv, h),
            y: axpy(&self.y, &k.dy, h),
            w: axpy(&self.w, &k.dw, h),
        }
    }
}

fn axpy(base: &[f64], delta: &[f64], h: f64) -> Vec<f64> {
    base.iter().zip(delta).map(|(b, d)| b + h * d).collect()
}

/// Time derivative of a [`SystemState`], same layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub dx: Vec<f64>,
    pub dv: Vec<f64>,
    pub dy: Vec<f64>,
    pub dw: Vec<f64>,
}

impl StateDerivative {
    pub fn zeros(n1: usize, n2: usize, dim: usize) -> Self {
        Self {
            dx: vec![0.0; n1 * dim],
            dv: vec![0.0; n1 * dim],
            dy: vec![0.0; n2 * dim],
            dw: vec![0.0; n2 * dim],
        }
    }

    fn fill_zero(&mut self) {
        self.dx.fill(0.0);
        self.dv.fill(0.0);
        self.dy.fill(0.0);
        self.dw.fill(0.0);
    }
}

/// Errors from model-level operations.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// Weight evaluated at a negative or non-finite radius.
    InvalidRadius { r: f64 },
    /// State array length disagrees with the parameters.
    ShapeMismatch { field: &'static str, expected: usize, actual: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::InvalidRadius { r } => {
                write!(f, "weight evaluated outside its domain: r = {r}")
            }
            ModelError::ShapeMismatch { field, expected, actual } => {
                write!(f, "state field `{field}` has {actual} coordinates, expected {expected}")
            }
        }
    }
}

/// Euclidean distance between two `dim`-dimensional points stored flat.
#[inline]
fn dist(a: &[f64], ai: usize, b: &[f64], bi: usize, dim: usize) -> f64 {
    let mut s = 0.0;
    for c in 0..dim {
        let d = b[bi * dim + c] - a[ai * dim + c];
        s += d * d;
    }
    libm::sqrt(s)
}

/// Evaluate the full right-hand side of the dynamics.
///
/// Validates the state shape first; all four interaction sums follow the
/// general system (intra normalized by the own group size, inter by the
/// opposite group size).
pub fn rhs(state: &SystemState, params: &ModelParams) -> Result<StateDerivative, ModelError> {
    state.validate_shape(params)?;
    let mut out = StateDerivative::zeros(params.n1, params.n2, params.dim);
    rhs_into(state, params, &mut out);
    Ok(out)
}

/// Right-hand side into a preallocated derivative; shape must already be
/// validated. Used by the integrator to avoid per-stage allocation.
pub(crate) fn rhs_into(state: &SystemState, params: &ModelParams, out: &mut StateDerivative) {
    let dim = params.dim;
    let (n1, n2) = (params.n1, params.n2);
    out.fill_zero();

    out.dx.copy_from_slice(&state.v);
    out.dy.copy_from_slice(&state.w);

    // Intra-group alignment. Each unordered pair contributes exactly
    // antisymmetric terms, so group momentum is conserved to rounding.
    let cs1 = params.kappa_s / n1 as f64;
    for i in 0..n1 {
        for k in (i + 1)..n1 {
            let wgt = params.psi_s.eval_unchecked(dist(&state.x, i, &state.x, k, dim));
            for c in 0..dim {
                let t = cs1 * wgt * (state.v[k * dim + c] - state.v[i * dim + c]);
                out.dv[i * dim + c] += t;
                out.dv[k * dim + c] -= t;
            }
        }
    }
    let cs2 = params.kappa_s / n2 as f64;
    for j in 0..n2 {
        for k in (j + 1)..n2 {
            let wgt = params.psi_s.eval_unchecked(dist(&state.y, j, &state.y, k, dim));
            for c in 0..dim {
                let t = cs2 * wgt * (state.w[k * dim + c] - state.w[j * dim + c]);
                out.dw[j * dim + c] += t;
                out.dw[k * dim + c] -= t;
            }
        }
    }

    // Inter-group repulsion: the same weight value feeds both directions.
    // When n1 == n2 the two prefactors coincide and the pair contributions
    // are exact negatives, which keeps the total mean velocity drift at
    // rounding level.
    let cd_v = params.kappa_d / n2 as f64;
    let cd_w = params.kappa_d / n1 as f64;
    for i in 0..n1 {
        for j in 0..n2 {
            let wgt = params.psi_d.eval_unchecked(dist(&state.x, i, &state.y, j, dim));
            for c in 0..dim {
                let diff = state.w[j * dim + c] - state.v[i * dim + c];
                out.dv[i * dim + c] -= cd_v * wgt * diff;
                out.dw[j * dim + c] += cd_w * wgt * diff;
            }
        }
    }

    // Rayleigh friction: relaxes each speed towards 1.
    if params.delta != 0.0 {
        for i in 0..n1 {
            let mut speed2 = 0.0;
            for c in 0..dim {
                let vc = state.v[i * dim + c];
                speed2 += vc * vc;
            }
            for c in 0..dim {
                out.dv[i * dim + c] += params.delta * state.v[i * dim + c] * (1.0 - speed2);
            }
        }
        for j in 0..n2 {
            let mut speed2 = 0.0;
            for c in 0..dim {
                let wc = state.w[j * dim + c];
                speed2 += wc * wc;
            }
            for c in 0..dim {
                out.dw[j * dim + c] += params.delta * state.w[j * dim + c] * (1.0 - speed2);
            }
        }
    }
}
