//! Numerical and closed-form integrals of communication weights.
//!
//! Weight integrals drive two consumers: the flocking-radius solver (which
//! needs `int_a^b psi` and feasibility of `int_a^inf psi`) and the Lyapunov
//! monitor (which needs `int_0^d psi`). Closed forms are used where the
//! kind/exponent admits one; everything else goes through adaptive Simpson
//! quadrature with a tight absolute tolerance.

use crate::model::{WeightKind, WeightSpec};

/// Absolute tolerance for adaptive Simpson quadrature.
pub(crate) const QUAD_TOL: f64 = 1e-10;

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// Classic recursive bisection: accept a panel when the Richardson estimate
/// of its error is below the panel's share of the tolerance.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson_panel(a, b, fa, fm, fb);
    simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson_panel(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || libm::fabs(err) <= 15.0 * tol {
        left + right + err / 15.0
    } else {
        simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// `int_a^b psi(r) dr` for `0 <= a <= b`.
///
/// Closed forms: any `Constant`, `Exponential`, and `PowerLaw` with
/// `beta` exactly 0.5 (`asinh`) or 1 (`atan`). Other power laws use
/// adaptive Simpson.
pub(crate) fn weight_integral(spec: &WeightSpec, a: f64, b: f64) -> f64 {
    debug_assert!(0.0 <= a && a <= b);
    match spec.kind {
        WeightKind::Constant => spec.amplitude * (b - a),
        WeightKind::Exponential => {
            spec.amplitude / spec.beta * (libm::exp(-spec.beta * a) - libm::exp(-spec.beta * b))
        }
        WeightKind::PowerLaw if spec.beta == 0.5 => {
            spec.amplitude * (libm::asinh(b) - libm::asinh(a))
        }
        WeightKind::PowerLaw if spec.beta == 1.0 => spec.amplitude * (libm::atan(b) - libm::atan(a)),
        WeightKind::PowerLaw => adaptive_simpson(&|r| spec.eval_unchecked(r), a, b, QUAD_TOL),
    }
}

/// `int_from^inf psi(r) dr`, or `None` when the tail diverges.
///
/// A power law decays like `r^(-2 beta)`, so its tail converges exactly when
/// `2 beta > 1`; constants always diverge; exponentials always converge.
pub(crate) fn weight_integral_to_inf(spec: &WeightSpec, from: f64) -> Option<f64> {
    debug_assert!(from >= 0.0);
    match spec.kind {
        WeightKind::Constant => None,
        WeightKind::Exponential => Some(spec.amplitude / spec.beta * libm::exp(-spec.beta * from)),
        WeightKind::PowerLaw if spec.beta <= 0.5 => None,
        WeightKind::PowerLaw if spec.beta == 1.0 => {
            Some(spec.amplitude * (core::f64::consts::FRAC_PI_2 - libm::atan(from)))
        }
        WeightKind::PowerLaw => {
            // Integrate out to where the analytic tail bound
            // int_X^inf <= amplitude * X^(1-2b) / (2b - 1) drops below tol.
            let two_b = 2.0 * spec.beta;
            let mut upper = if from > 1.0 { 2.0 * from } else { 2.0 };
            let mut total = weight_integral(spec, from, upper);
            loop {
                let tail = spec.amplitude * libm::pow(upper, 1.0 - two_b) / (two_b - 1.0);
                if tail < QUAD_TOL {
                    return Some(total + 0.5 * tail);
                }
                let next = upper * 2.0;
                total += weight_integral(spec, upper, next);
                upper = next;
            }
        }
    }
}
