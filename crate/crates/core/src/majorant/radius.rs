use std::fmt::Write;

use crate::algebra::TruncatedSeries;
use crate::error::{Error, Result};

use super::flow::majorant_flow_checkpoints;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusRow {
    pub delta: f64,
    pub radius: f64,
    pub norm: f64,
}

/// Largest `rho` with `||h||_rho <= level` (bisection; the norm is
/// increasing in `rho`). `None` when even the upper end `rho_max` fits.
pub fn norm_radius(h: &TruncatedSeries, level: f64, rho_max: f64) -> Option<f64> {
    if h.polydisk_norm_upper(rho_max) <= level {
        return None;
    }
    let (mut lo, mut hi) = (0.0, rho_max);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h.polydisk_norm_upper(mid) <= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Radius profile of the majorant flow: at each `delta` the largest `rho`
/// with `||Hbar(delta)||_rho <= 2 ||Hbar(0)||_{rho0}`.
pub fn radius_profile(seed: &TruncatedSeries, rho0: f64, deltas: &[f64], steps_per_unit: usize) -> Result<Vec<RadiusRow>> {
    if !(rho0 > 0.0) {
        return Err(Error::InvalidParameter(format!("rho0 must be > 0, got {rho0}")));
    }
    let level = 2.0 * seed.polydisk_norm_upper(rho0);
    if level == 0.0 {
        return Err(Error::ZeroSeries);
    }
    let states = majorant_flow_checkpoints(seed, deltas, steps_per_unit)?;
    let rho_max = 1e3 * rho0;
    deltas
        .iter()
        .zip(states)
        .map(|(&delta, h)| {
            let radius = norm_radius(&h, level, rho_max)
                .ok_or_else(|| Error::InvalidParameter(format!("norm stays below the level up to rho = {rho_max}")))?;
            Ok(RadiusRow { delta, radius, norm: h.polydisk_norm_upper(radius) })
        })
        .collect()
}

pub fn radius_profile_csv(rows: &[RadiusRow]) -> String {
    let mut s = String::from("delta,radius,norm\n");
    for r in rows {
        writeln!(s, "{},{},{}", r.delta, r.radius, r.norm).unwrap();
    }
    s
}

/// Fit of `radius = A / (1 + B delta)` minimising the squared error of
/// `log radius`; for fixed `B` the optimal `A` is explicit, `B >= 0` is
/// found by golden-section search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseLawFit {
    pub a: f64,
    pub b: f64,
    /// `max |fit - radius| / radius` over the data.
    pub max_rel_residual: f64,
}

pub fn fit_inverse_law(rows: &[RadiusRow]) -> Result<InverseLawFit> {
    if rows.len() < 2 || rows.iter().any(|r| !(r.radius > 0.0) || !(r.delta >= 0.0)) {
        return Err(Error::InvalidParameter("need at least two points with radius > 0, delta >= 0".into()));
    }
    let k = rows.len() as f64;
    let log_a = |b: f64| rows.iter().map(|r| r.radius.ln() + (b * r.delta).ln_1p()).sum::<f64>() / k;
    let cost = |b: f64| {
        let la = log_a(b);
        rows.iter().map(|r| (r.radius.ln() + (b * r.delta).ln_1p() - la).powi(2)).sum::<f64>()
    };
    // Search in t = ln(1 + B) on [0, ln(1 + 1e6)].
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1e6f64.ln_1p());
    let b_of = |t: f64| t.exp_m1();
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (cost(b_of(x1)), cost(b_of(x2)));
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = cost(b_of(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = cost(b_of(x2));
        }
    }
    let mut b = b_of(0.5 * (lo + hi));
    if cost(0.0) <= cost(b) {
        b = 0.0;
    }
    let a = log_a(b).exp();
    let max_rel_residual =
        rows.iter().map(|r| ((a / (1.0 + b * r.delta)) - r.radius).abs() / r.radius).fold(0.0, f64::max);
    Ok(InverseLawFit { a, b, max_rel_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MultiIndex, C64};

    #[test]
    fn exact_law_recovered() {
        let rows: Vec<RadiusRow> =
            (0..6).map(|i| i as f64).map(|d| RadiusRow { delta: d, radius: 2.0 / (1.0 + 0.5 * d), norm: 0.0 }).collect();
        let fit = fit_inverse_law(&rows).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-8 && (fit.b - 0.5).abs() < 1e-8, "{fit:?}");
        assert!(fit.max_rel_residual < 1e-8);
        assert!(radius_profile_csv(&rows).starts_with("delta,radius,norm\n0,2,0\n"));
    }

    #[test]
    fn radius_of_monomial() {
        let h = TruncatedSeries::monomial(1, 4, MultiIndex::new(&[3], &[0]), C64::new(1.0, 0.0));
        let r = norm_radius(&h, 8.0, 100.0).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }
}
