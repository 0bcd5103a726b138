use serde::Serialize;

use crate::error::{Error, Result};

/// Analyticity radius of the Burgers solution with data
/// `f'(zeta) = a zeta^2 / (b - zeta)` at time `tau = 8 n delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub a: f64,
    pub b: f64,
    pub tau: f64,
    pub radius: f64,
}

/// `b / (1 + 2 a tau + 2 sqrt(a tau (1 + a tau)))`, `tau = 8 n delta`.
pub fn burgers_radius(a: f64, b: f64, n: usize, delta: f64) -> Result<RadiusEstimate> {
    if !(a > 0.0 && b > 0.0 && delta >= 0.0) || n == 0 {
        return Err(Error::InvalidParameter(format!("need a, b > 0, n >= 1, delta >= 0 (a = {a}, b = {b}, delta = {delta})")));
    }
    let tau = 8.0 * n as f64 * delta;
    let at = a * tau;
    Ok(RadiusEstimate { a, b, tau, radius: b / (1.0 + 2.0 * at + 2.0 * (at * (1.0 + at)).sqrt()) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FixedPoint {
    Converged { g: f64, iterations: usize },
    /// `zeta + tau G` reached `b`.
    Diverged { iterations: usize },
    Undecided { g: f64 },
}

impl FixedPoint {
    pub fn diverged(&self) -> bool {
        matches!(self, FixedPoint::Diverged { .. })
    }
}

pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 200;

/// Iterate `G <- a xi^2 / (b - xi)`, `xi = zeta + tau G`, from `G = 0`.
pub fn burgers_fixed_point(a: f64, b: f64, tau: f64, zeta: f64, max_iter: usize) -> FixedPoint {
    let mut g = 0.0;
    for it in 0..max_iter {
        let xi = zeta + tau * g;
        if xi >= b {
            return FixedPoint::Diverged { iterations: it };
        }
        let next = a * xi * xi / (b - xi);
        if (next - g).abs() <= FIXED_POINT_TOL * next.abs().max(1.0) {
            return FixedPoint::Converged { g: next, iterations: it + 1 };
        }
        g = next;
    }
    FixedPoint::Undecided { g }
}

/// Smallest `zeta in (0, b)` at which the fixed-point iteration diverges,
/// by bisection.
pub fn burgers_boundary(a: f64, b: f64, n: usize, delta: f64) -> Result<f64> {
    let est = burgers_radius(a, b, n, delta)?;
    let (mut lo, mut hi) = (0.0, b);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if burgers_fixed_point(a, b, est.tau, mid, FIXED_POINT_MAX_ITER).diverged() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
