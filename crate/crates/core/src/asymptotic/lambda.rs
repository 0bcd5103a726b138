//! The map `Lambda` matching the flow with the asymptotic flow at
//! `delta -> +inf`, computed degree by degree on exact trajectories.

use std::collections::BTreeMap;

use crate::algebra::{FrequencyVector, MultiIndex, TruncatedSeries};
use crate::error::{Error, Result};
use crate::exp_poly::{ExpPolynomial, PURGE_EPS};
use crate::flow::exact::check_seed;
use crate::flow::{rhs_v1, solve_flow, Snapshot};

use super::flows::asymptotic_flow_explicit;
use super::graded::grade;

/// Relative size of a `delta`-dependent remainder in `Ghat_k` that is still
/// accepted as rounding.
pub const LAMBDA_TOLERANCE: f64 = 1e-9;

/// Exact polynomial trajectories of `dG_k/ddelta = v1_k(G)`.
pub fn solve_asymptotic(seed: &TruncatedSeries, freq: &FrequencyVector) -> Result<BTreeMap<MultiIndex, ExpPolynomial>> {
    check_seed(seed, freq)?;
    let n = seed.n();
    let mut traj: BTreeMap<MultiIndex, ExpPolynomial> = BTreeMap::new();
    for d in 3..=seed.max_degree() {
        let level = level_polynomials(d, seed, freq, &traj, |_| ExpPolynomial::zero(n));
        for (k, v) in level {
            if !v.is_zero() {
                traj.insert(k, v);
            }
        }
    }
    Ok(traj)
}

/// For each reachable `k` of degree `d`: `seed_k + int_0^delta v1_k + extra(k)`.
fn level_polynomials(
    d: u32,
    seed: &TruncatedSeries,
    freq: &FrequencyVector,
    traj: &BTreeMap<MultiIndex, ExpPolynomial>,
    extra: impl Fn(&MultiIndex) -> ExpPolynomial,
) -> Vec<(MultiIndex, ExpPolynomial)> {
    let n = seed.n();
    let snap = Snapshot::new(freq, traj);
    let mut keys: Vec<MultiIndex> = seed.keys().filter(|k| k.degree() == d).copied().collect();
    keys.extend(snap.reachable(d));
    keys.sort();
    keys.dedup();
    keys.iter()
        .map(|k| {
            let mut v = rhs_v1(k, &snap).integrate();
            v.add_assign(&ExpPolynomial::constant(n, seed.get(k)));
            v.add_assign(&extra(k));
            (*k, v.purged(PURGE_EPS))
        })
        .collect()
}

/// `Ghat = Lambda(Hhat)`: `Ghat_k` is the `nu = 0` part of `calH_k(delta)`
/// minus the polynomial `p_k(delta)` generated by the lower-degree `Ghat`.
/// The difference must be independent of `delta`; any leftover `delta^s`,
/// `s > 0`, beyond rounding is reported as a structural error.
pub fn lambda_conjugacy(seed: &TruncatedSeries, freq: &FrequencyVector) -> Result<TruncatedSeries> {
    let sol = solve_flow(seed, freq)?;
    let n = seed.n();
    let m = seed.max_degree();
    let mut ghat = TruncatedSeries::diamond(n, m);
    // G trajectories for degrees already fixed.
    let mut g_traj: BTreeMap<MultiIndex, ExpPolynomial> = BTreeMap::new();
    for d in 3..=m {
        let mut keys: Vec<MultiIndex> = sol.trajectories().keys().filter(|k| k.degree() == d).copied().collect();
        let snap = Snapshot::new(freq, &g_traj);
        keys.extend(snap.reachable(d));
        keys.sort();
        keys.dedup();
        let mut level = Vec::new();
        for k in keys {
            let p = rhs_v1(&k, &snap).integrate();
            let calh = sol.trajectory(&k);
            let diff = calh.polynomial_part().sub(&p);
            let scale = 1.0 + calh.max_abs_coeff().max(p.max_abs_coeff());
            let mut constant = crate::algebra::C64::default();
            for (s, e, c) in diff.iter() {
                debug_assert!(e.is_zero());
                if s == 0 {
                    constant = c;
                } else if c.norm() > LAMBDA_TOLERANCE * scale {
                    return Err(Error::Structural(format!(
                        "Lambda at {k:?}: remainder {c} delta^{s} does not cancel"
                    )));
                }
            }
            ghat.add_term(k, constant);
            let mut gk = p;
            gk.add_assign(&ExpPolynomial::constant(n, constant));
            level.push((k, gk.purged(PURGE_EPS)));
        }
        drop(snap);
        for (k, v) in level {
            if !v.is_zero() {
                g_traj.insert(k, v);
            }
        }
    }
    Ok(ghat)
}

/// Residual of the conjugacy in the original variables,
/// `Lambda(H_⋄(delta)) = T_{-delta} Psi^delta(Lambda(Hhat))`, where
/// `T_{-delta}` multiplies the coefficient at `k` by `e^{-omega_{k'} delta}`.
pub fn lambda_conjugacy_residual(seed: &TruncatedSeries, freq: &FrequencyVector, delta: f64) -> Result<f64> {
    let sol = solve_flow(seed, freq)?;
    let lhs = lambda_conjugacy(&sol.h_at(delta), freq)?;
    let g0 = grade(&lambda_conjugacy(seed, freq)?)?;
    let rhs = asymptotic_flow_explicit(&g0, freq, delta)?.rescale(freq, delta).reconstruct();
    Ok(lhs.max_abs_diff(&rhs))
}

/// Same comparison with the flow taken in the rescaled variables,
/// `Lambda(calH(delta))` against `Psi^delta(Lambda(Hhat))`.
pub fn lambda_conjugacy_residual_rescaled(seed: &TruncatedSeries, freq: &FrequencyVector, delta: f64) -> Result<f64> {
    let sol = solve_flow(seed, freq)?;
    let lhs = lambda_conjugacy(&sol.calh_at(delta), freq)?;
    let g0 = grade(&lambda_conjugacy(seed, freq)?)?;
    let rhs = asymptotic_flow_explicit(&g0, freq, delta)?.reconstruct();
    Ok(lhs.max_abs_diff(&rhs))
}
