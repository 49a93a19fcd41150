//! Closed-form solutions and analytic bounds for small or averaged systems.
//!
//! These are the ground truth the integrator and certificate layers are
//! tested against: two opposed singletons, the three-particle reduced
//! modes, the exact center-velocity law under constant inter-group
//! weights, fluctuation-energy bounds, and the alignment radius implied by
//! the integral feasibility condition.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{ModelParams, WeightKind, WeightSpec};
use crate::quadrature::{weight_integral, weight_integral_to_inf};

/// Initial data for the exactly solvable 1-vs-1 configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleIC {
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub v0: Vec<f64>,
    pub w0: Vec<f64>,
    pub kappa_d: f64,
}

/// Initial data for the reduced three-particle modes: `u1 = v1 - v2`
/// (intra-group spread) and `u2 = v2 - w1` (inter-group gap).
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeParticleIC {
    pub u1_0: Vec<f64>,
    pub u2_0: Vec<f64>,
    pub kappa_s: f64,
    pub kappa_d: f64,
}

/// Errors from the analytic-bound oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// The uniform bound needs friction; without it the energy can grow
    /// without bound and only the exponential envelope applies.
    FrictionRequired { delta: f64 },
    /// The available weight integral cannot absorb the velocity spread;
    /// `deficit` is how much spread is left uncovered.
    Infeasible { deficit: f64 },
    /// Structurally invalid input (non-positive coupling, bad weight).
    InvalidInput(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::FrictionRequired { delta } => {
                write!(f, "uniform bound requires delta > 0, got {delta}")
            }
            OracleError::Infeasible { deficit } => write!(
                f,
                "alignment condition infeasible: velocity spread exceeds the available \
                 weight integral by {deficit}"
            ),
            OracleError::InvalidInput(msg) => write!(f, "invalid oracle input: {msg}"),
        }
    }
}

/// Exact solution of the 1-vs-1 system with constant unit inter-group
/// weight and no friction, returned as `(x, y, v, w)` at time `t`.
///
/// The velocity difference obeys `u' = 2*kappa_d*u` (each particle pushes
/// the gap at rate `kappa_d`), the velocity sum is conserved, and the
/// positions follow by integrating the half-sum and half-difference.
pub fn two_particle_exact(ic: &TwoParticleIC, t: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    debug_assert!(t >= 0.0, "time must be nonnegative");
    debug_assert!(ic.kappa_d > 0.0, "kappa_d must be positive");
    let dim = ic.x0.len();
    debug_assert!(ic.y0.len() == dim && ic.v0.len() == dim && ic.w0.len() == dim);

    let growth = libm::exp(2.0 * ic.kappa_d * t);
    let mut x = Vec::with_capacity(dim);
    let mut y = Vec::with_capacity(dim);
    let mut v = Vec::with_capacity(dim);
    let mut w = Vec::with_capacity(dim);
    for k in 0..dim {
        let u0 = ic.v0[k] - ic.w0[k];
        let s0 = ic.v0[k] + ic.w0[k];
        let u = u0 * growth;
        v.push(0.5 * (s0 + u));
        w.push(0.5 * (s0 - u));
        let z_sum = ic.x0[k] + ic.y0[k] + t * s0;
        let z_diff = (ic.x0[k] - ic.y0[k]) + u0 / (2.0 * ic.kappa_d) * (growth - 1.0);
        x.push(0.5 * (z_sum + z_diff));
        y.push(0.5 * (z_sum - z_diff));
    }
    (x, y, v, w)
}

/// Exact reduced modes of the 2-vs-1 system with constant unit weights and
/// no friction, returned as `(u1, u2)` at time `t`.
///
/// `u1` decays at rate `kappa_s - kappa_d/2` independently of `u2`; `u2`
/// solves `u2' = ((kappa_s + kappa_d)/2) u1 + (3 kappa_d / 2) u2` by
/// variation of constants.
pub fn three_particle_exact(ic: &ThreeParticleIC, t: f64) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(t >= 0.0, "time must be nonnegative");
    debug_assert!(ic.kappa_s > 0.0 && ic.kappa_d > 0.0, "couplings must be positive");
    let dim = ic.u1_0.len();
    debug_assert!(ic.u2_0.len() == dim);

    let decay = libm::exp(-(ic.kappa_s - 0.5 * ic.kappa_d) * t);
    let growth = libm::exp(1.5 * ic.kappa_d * t);
    let mut u1 = Vec::with_capacity(dim);
    let mut u2 = Vec::with_capacity(dim);
    for k in 0..dim {
        u1.push(ic.u1_0[k] * decay);
        u2.push((ic.u2_0[k] + 0.5 * ic.u1_0[k]) * growth - 0.5 * ic.u1_0[k] * decay);
    }
    (u1, u2)
}

/// Exact center velocities under a constant unit inter-group weight and no
/// friction: the mean sum is conserved while the mean difference grows
/// like `e^{2*kappa_d*t}`, regardless of group sizes or intra-group
/// weights.
pub fn macro_exact_constant_inter(
    vc0: &[f64],
    wc0: &[f64],
    kappa_d: f64,
    t: f64,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(t >= 0.0, "time must be nonnegative");
    debug_assert_eq!(vc0.len(), wc0.len());
    let growth = libm::exp(2.0 * kappa_d * t);
    let mut vc = Vec::with_capacity(vc0.len());
    let mut wc = Vec::with_capacity(wc0.len());
    for k in 0..vc0.len() {
        let half_sum = 0.5 * (vc0[k] + wc0[k]);
        let half_diff = 0.5 * (vc0[k] - wc0[k]) * growth;
        vc.push(half_sum + half_diff);
        wc.push(half_sum - half_diff);
    }
    (vc, wc)
}

/// Uniform-in-time bound on the total fluctuation energy when friction is
/// active: `max { 2 + 4*kappa_d*psi_d_sup/delta, m2_0 }`.
///
/// Requires `delta > 0`; without friction the energy is only bounded by
/// the exponential envelope [`exp_growth_bound`].
pub fn riccati_upper_bound(params: &ModelParams, m2_0: f64) -> Result<f64, OracleError> {
    if !(params.delta > 0.0) {
        return Err(OracleError::FrictionRequired { delta: params.delta });
    }
    if !(m2_0 >= 0.0) {
        return Err(OracleError::InvalidInput(format!("m2_0 must be nonnegative, got {m2_0}")));
    }
    let plateau = 2.0 + 4.0 * params.kappa_d * params.psi_d.amplitude / params.delta;
    Ok(if m2_0 > plateau { m2_0 } else { plateau })
}

/// Frictionless envelope on the total fluctuation energy:
/// `m2_0 * e^{4*kappa_d*psi_d_sup*t}`.
pub fn exp_growth_bound(m2_0: f64, kappa_d: f64, psi_d_sup: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0, "time must be nonnegative");
    m2_0 * libm::exp(4.0 * kappa_d * psi_d_sup * t)
}

/// Smallest radius `x >= dx0` whose weight integral absorbs the initial
/// velocity spread: `kappa_s * integral(dx0..x) of psi_s = dv0`.
///
/// Closed forms cover the constant, exponential, and the two standard
/// power-law exponents; other exponents fall back to monotone bracketing
/// with adaptive quadrature. Errors if even the full tail integral falls
/// short of `dv0`.
pub fn flocking_radius(
    psi_s: &WeightSpec,
    kappa_s: f64,
    dx0: f64,
    dv0: f64,
) -> Result<f64, OracleError> {
    if !(kappa_s > 0.0) {
        return Err(OracleError::InvalidInput(format!("kappa_s must be positive, got {kappa_s}")));
    }
    if !(dx0 >= 0.0) || !(dv0 >= 0.0) {
        return Err(OracleError::InvalidInput(format!(
            "spreads must be nonnegative, got dx0 = {dx0}, dv0 = {dv0}"
        )));
    }
    let weight_issues = psi_s.validate("psi_s");
    if !weight_issues.is_empty() {
        return Err(OracleError::InvalidInput(weight_issues.join("; ")));
    }
    if dv0 == 0.0 {
        return Ok(dx0);
    }

    // Required integral mass, in weight units.
    let target = dv0 / kappa_s;
    if let Some(available) = weight_integral_to_inf(psi_s, dx0) {
        if available < target {
            return Err(OracleError::Infeasible { deficit: dv0 - kappa_s * available });
        }
    }

    let a = psi_s.amplitude;
    let beta = psi_s.beta;
    let x = match psi_s.kind {
        WeightKind::Constant => dx0 + target / a,
        WeightKind::Exponential => {
            // (a/beta)(e^{-beta dx0} - e^{-beta x}) = target
            let tail = libm::exp(-beta * dx0) - beta * target / a;
            -libm::log(tail) / beta
        }
        WeightKind::PowerLaw if beta == 0.5 => {
            // a * (asinh(x) - asinh(dx0)) = target
            libm::sinh(libm::asinh(dx0) + target / a)
        }
        WeightKind::PowerLaw if beta == 1.0 => {
            // a * (atan(x) - atan(dx0)) = target
            libm::tan(libm::atan(dx0) + target / a)
        }
        WeightKind::PowerLaw => bracket_radius(psi_s, dx0, target),
    };
    Ok(x)
}

/// Monotone root bracketing for the generic power-law exponent: double the
/// upper bracket until the integral covers the target, then bisect.
fn bracket_radius(psi_s: &WeightSpec, dx0: f64, target: f64) -> f64 {
    let mut lo = dx0;
    let mut hi = if dx0 > 0.0 { 2.0 * dx0 } else { 1.0 };
    let mut guard = 0;
    while weight_integral(psi_s, dx0, hi) < target {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        debug_assert!(guard < 2048, "bracket expansion failed to terminate");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * if hi > 1.0 { hi } else { 1.0 } {
            break;
        }
        if weight_integral(psi_s, dx0, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        let scale = 1.0_f64.max(expected.abs());
        assert!(
            (actual - expected).abs() <= tol * scale,
            "expected {expected}, got {actual} (tol {tol})"
        );
    }

    #[test]
    fn two_particle_initial_condition() {
        let ic = TwoParticleIC {
            x0: vec![1.0, -2.0],
            y0: vec![0.5, 0.5],
            v0: vec![0.1, 0.2],
            w0: vec![-0.3, 0.4],
            kappa_d: 2.0,
        };
        let (x, y, v, w) = two_particle_exact(&ic, 0.0);
        // Half-sum/half-difference reconstruction is exact only up to
        // rounding, even at t = 0.
        for k in 0..2 {
            assert_close(x[k], ic.x0[k], 1e-15);
            assert_close(y[k], ic.y0[k], 1e-15);
            assert_close(v[k], ic.v0[k], 1e-15);
            assert_close(w[k], ic.w0[k], 1e-15);
        }
    }

    #[test]
    fn two_particle_equal_velocities_never_separate() {
        let ic = TwoParticleIC {
            x0: vec![0.0],
            y0: vec![1.0],
            v0: vec![0.7],
            w0: vec![0.7],
            kappa_d: 3.0,
        };
        for t in [0.5, 1.0, 4.0] {
            let (x, y, v, w) = two_particle_exact(&ic, t);
            assert_close(v[0], 0.7, 1e-15);
            assert_close(w[0], 0.7, 1e-15);
            assert_close(x[0], 0.7 * t, 1e-15);
            assert_close(y[0], 1.0 + 0.7 * t, 1e-15);
        }
    }

    #[test]
    fn two_particle_closed_form_point() {
        // kappa_d = 1, v0 = 2, w0 = 0, x0 = y0 = 0, t = ln 2: the velocity
        // gap quadruples (rate 2*kappa_d), so v - w = 8 and the gap
        // integral gives x - y = (2/2)(4 - 1) = 3.
        let t = core::f64::consts::LN_2;
        let ic = TwoParticleIC {
            x0: vec![0.0],
            y0: vec![0.0],
            v0: vec![2.0],
            w0: vec![0.0],
            kappa_d: 1.0,
        };
        let (x, y, v, w) = two_particle_exact(&ic, t);
        assert_close(v[0] - w[0], 8.0, 1e-14);
        assert_close(v[0], 5.0, 1e-14);
        assert_close(w[0], -3.0, 1e-14);
        assert_close(x[0] - y[0], 3.0, 1e-14);
        assert_close(x[0], t + 1.5, 1e-14);
        assert_close(y[0], t - 1.5, 1e-14);
    }

    #[test]
    fn three_particle_homogeneous_mode() {
        let ic = ThreeParticleIC {
            u1_0: vec![0.0],
            u2_0: vec![0.4],
            kappa_s: 1.3,
            kappa_d: 2.0,
        };
        let (u1, u2) = three_particle_exact(&ic, 0.7);
        assert_eq!(u1[0], 0.0);
        assert_close(u2[0], 0.4 * libm::exp(1.5 * 2.0 * 0.7), 1e-15);
    }

    #[test]
    fn three_particle_reference_point() {
        let ic = ThreeParticleIC {
            u1_0: vec![1.0],
            u2_0: vec![0.0],
            kappa_s: 2.0,
            kappa_d: 2.0,
        };
        let (u1, u2) = three_particle_exact(&ic, 1.0);
        let e = core::f64::consts::E;
        assert_close(u1[0], 1.0 / e, 1e-15);
        assert_close(u2[0], 0.5 * e * e * e - 0.5 / e, 1e-15);
        // Decimal reference for the same point.
        assert_close(u1[0], 0.367879, 1e-5);
        assert_close(u2[0], 9.8588287, 1e-6);
    }

    #[test]
    fn three_particle_weak_intra_never_contracts() {
        // With kappa_s <= kappa_d/2 the intra-group mode cannot decay.
        let ic = ThreeParticleIC {
            u1_0: vec![0.5],
            u2_0: vec![0.0],
            kappa_s: 0.9,
            kappa_d: 2.0,
        };
        let mut prev = 0.5;
        for t in [0.5, 1.0, 2.0, 4.0] {
            let (u1, _) = three_particle_exact(&ic, t);
            assert!(u1[0].abs() >= prev, "|u1| shrank at t = {t}");
            prev = u1[0].abs();
        }
    }

    #[test]
    fn macro_law_reference_point_and_conservation() {
        let (vc, wc) = macro_exact_constant_inter(&[1.0], &[0.0], 0.5, 1.0);
        let e = core::f64::consts::E;
        assert_close(vc[0] - wc[0], e, 1e-15);
        assert_close(vc[0], 0.5 + 0.5 * e, 1e-15);
        assert_close(vc[0] + wc[0], 1.0, 1e-15);

        let (vc0, wc0) = macro_exact_constant_inter(&[0.3, -0.1], &[0.3, -0.1], 2.0, 5.0);
        assert_eq!(vc0, vec![0.3, -0.1]);
        assert_eq!(wc0, vec![0.3, -0.1]);
    }

    #[test]
    fn riccati_bound_arithmetic() {
        let params = ModelParams {
            n1: 2,
            n2: 2,
            dim: 2,
            kappa_s: 1.0,
            kappa_d: 10.0,
            delta: 1.0,
            psi_s: WeightSpec::constant(1.0),
            psi_d: WeightSpec::constant(1.0),
        };
        assert_eq!(riccati_upper_bound(&params, 1.0).unwrap(), 42.0);
        assert_eq!(riccati_upper_bound(&params, 100.0).unwrap(), 100.0);

        let no_repulsion = ModelParams { kappa_d: 0.0, ..params.clone() };
        assert_eq!(riccati_upper_bound(&no_repulsion, 1.0).unwrap(), 2.0);
        assert_eq!(riccati_upper_bound(&no_repulsion, 7.0).unwrap(), 7.0);

        let no_friction = ModelParams { delta: 0.0, ..params };
        assert!(matches!(
            riccati_upper_bound(&no_friction, 1.0),
            Err(OracleError::FrictionRequired { .. })
        ));
    }

    #[test]
    fn exp_growth_bound_arithmetic() {
        assert_eq!(exp_growth_bound(3.0, 2.0, 1.0, 0.0), 3.0);
        assert_eq!(exp_growth_bound(3.0, 0.0, 1.0, 10.0), 3.0);
        assert_close(exp_growth_bound(1.0, 1.0, 1.0, 1.0), 54.598150033144236, 1e-15);
    }

    #[test]
    fn flocking_radius_closed_forms() {
        // No spread: radius stays at the initial diameter.
        let psi = WeightSpec::power_law(1.0, 1.0);
        assert_eq!(flocking_radius(&psi, 3.0, 2.5, 0.0).unwrap(), 2.5);

        // arctan weight: atan(x) = 1.
        let x = flocking_radius(&psi, 1.0, 0.0, 1.0).unwrap();
        assert_close(x, libm::tan(1.0), 1e-12);
        assert_close(x, 1.557408, 1e-6);

        // Exponential weight: 2(1 - e^{-x}) = 1.
        let psi_exp = WeightSpec::exponential(2.0, 1.0);
        let x = flocking_radius(&psi_exp, 1.0, 0.0, 1.0).unwrap();
        assert_close(x, core::f64::consts::LN_2, 1e-12);

        // Constant weight: linear absorption.
        let psi_const = WeightSpec::constant(2.0);
        let x = flocking_radius(&psi_const, 0.5, 1.0, 3.0).unwrap();
        assert_close(x, 1.0 + 3.0 / (0.5 * 2.0), 1e-12);

        // Inverse-square-root power law via asinh.
        let psi_half = WeightSpec::power_law(1.0, 0.5);
        let x = flocking_radius(&psi_half, 1.0, 0.0, 2.0).unwrap();
        assert_close(x, libm::sinh(2.0), 1e-12);
    }

    #[test]
    fn flocking_radius_infeasible_reports_deficit() {
        let psi = WeightSpec::power_law(1.0, 1.0);
        // Available mass from 0 is pi/2 < 2.
        match flocking_radius(&psi, 1.0, 0.0, 2.0) {
            Err(OracleError::Infeasible { deficit }) => {
                assert_close(deficit, 2.0 - core::f64::consts::FRAC_PI_2, 1e-12);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn flocking_radius_long_range_always_feasible() {
        // Divergent tail: even a huge spread is absorbed eventually.
        let psi = WeightSpec::power_law(1.0, 0.4);
        let x = flocking_radius(&psi, 1.0, 0.0, 50.0).unwrap();
        assert!(x.is_finite() && x > 0.0);
        // The defining equation holds at the returned radius.
        let mass = crate::quadrature::weight_integral(&psi, 0.0, x);
        assert_close(mass, 50.0, 1e-9);
    }

    #[test]
    fn flocking_radius_generic_exponent_matches_quadrature() {
        let psi = WeightSpec::power_law(1.5, 0.75);
        let dv0 = 1.2;
        let x = flocking_radius(&psi, 2.0, 0.5, dv0).unwrap();
        let mass = crate::quadrature::weight_integral(&psi, 0.5, x);
        assert_close(2.0 * mass, dv0, 1e-9);
    }

    #[test]
    fn flocking_radius_monotone_in_spread() {
        let psi = WeightSpec::power_law(1.0, 0.4);
        let mut prev = 0.0;
        for dv0 in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let x = flocking_radius(&psi, 1.0, 0.2, dv0).unwrap();
            assert!(x >= prev, "radius shrank at dv0 = {dv0}");
            prev = x;
        }
    }
}
