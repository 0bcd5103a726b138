//! Degree-by-degree exact solution of the nilpotent flow.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::rhs::{rhs_v1, rhs_v2bar, Snapshot};
use crate::algebra::{FrequencyVector, MultiIndex, NormalSeries, TruncatedSeries};
use crate::error::{Error, Result};
use crate::exp_poly::{ExpPolynomial, Exponent, PURGE_EPS};

/// Exact trajectories `calH_k(delta)` for every reachable `k`, `3 <= |k| <= M`.
#[derive(Clone, Debug)]
pub struct FlowSolution {
    freq: FrequencyVector,
    max_degree: u32,
    seed: TruncatedSeries,
    trajectories: BTreeMap<MultiIndex, ExpPolynomial>,
}

pub(crate) fn check_seed(seed: &TruncatedSeries, freq: &FrequencyVector) -> Result<()> {
    if seed.n() != freq.n() {
        return Err(Error::DimensionMismatch(format!("seed has n = {}, omega has {} entries", seed.n(), freq.n())));
    }
    if !seed.is_diamond() {
        return Err(Error::Support("seed must be a diamond series (no terms below degree 3)".into()));
    }
    if freq.max_checked_order() < seed.max_degree() {
        return Err(Error::OrderOverflow { order: seed.max_degree(), max: freq.max_checked_order() });
    }
    Ok(())
}

/// Solve `d calH_k / d delta = v1_k + v2bar_k`, `calH_k(0) = seed_k`.
///
/// Degree 3 is constant. Each later degree is the seed plus the exact
/// integral of a quadratic expression in lower degrees; the coefficients
/// within one degree are computed in parallel.
pub fn solve_flow(seed: &TruncatedSeries, freq: &FrequencyVector) -> Result<FlowSolution> {
    check_seed(seed, freq)?;
    let n = seed.n();
    let m = seed.max_degree();
    let mut traj: BTreeMap<MultiIndex, ExpPolynomial> = BTreeMap::new();
    for d in 3..=m {
        let mut keys: Vec<MultiIndex> = seed.keys().filter(|k| k.degree() == d).copied().collect();
        let level: Vec<(MultiIndex, ExpPolynomial)> = {
            let snap = Snapshot::new(freq, &traj);
            keys.extend(snap.reachable(d));
            keys.sort();
            keys.dedup();
            keys.par_iter()
                .map(|k| {
                    let mut rhs = rhs_v1(k, &snap);
                    rhs.add_assign(&rhs_v2bar(k, &snap));
                    let mut value = rhs.integrate();
                    value.add_assign(&ExpPolynomial::constant(n, seed.get(k)));
                    (*k, value.purged(PURGE_EPS))
                })
                .collect()
        };
        for (k, v) in level {
            if !v.is_zero() {
                traj.insert(k, v);
            }
        }
    }
    let sol = FlowSolution { freq: freq.clone(), max_degree: m, seed: seed.clone(), trajectories: traj };
    sol.validate()?;
    Ok(sol)
}

impl FlowSolution {
    pub fn freq(&self) -> &FrequencyVector {
        &self.freq
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn n(&self) -> usize {
        self.freq.n()
    }

    pub fn seed(&self) -> &TruncatedSeries {
        &self.seed
    }

    pub fn trajectories(&self) -> &BTreeMap<MultiIndex, ExpPolynomial> {
        &self.trajectories
    }

    /// `calH_k`, zero when `k` is unreachable.
    pub fn trajectory(&self, k: &MultiIndex) -> ExpPolynomial {
        self.trajectories.get(k).cloned().unwrap_or_else(|| ExpPolynomial::zero(self.n()))
    }

    /// `H_k(delta) = e^{-omega_{k'} delta} calH_k(delta)` as an exp-polynomial.
    pub fn h_trajectory(&self, k: &MultiIndex) -> ExpPolynomial {
        self.trajectory(k).shift_exponent(&Exponent::omega_q(&k.kprime(), &self.freq))
    }

    /// The rescaled series `calH(delta)`.
    pub fn calh_at(&self, delta: f64) -> TruncatedSeries {
        let mut out = TruncatedSeries::diamond(self.n(), self.max_degree);
        for (k, t) in &self.trajectories {
            out.add_term(*k, t.eval(delta));
        }
        out
    }

    /// `H_⋄(delta)` in the original variables.
    pub fn h_at(&self, delta: f64) -> TruncatedSeries {
        let mut out = TruncatedSeries::diamond(self.n(), self.max_degree);
        for (k, t) in &self.trajectories {
            let decay = (-self.freq.omega_of(&k.kprime()) * delta).exp();
            out.add_term(*k, t.eval(delta) * decay);
        }
        out
    }

    /// Structure check: trajectories start at the seed, degree 3 is
    /// constant, and for `k' = 0` every `nu = 0` term has `s = 0`.
    pub fn validate(&self) -> Result<()> {
        for (k, t) in &self.trajectories {
            let start = t.eval(0.0);
            let want = self.seed.get(k);
            if (start - want).norm() > 1e-9 * (1.0 + t.max_abs_coeff()) {
                return Err(Error::Structural(format!("trajectory {k:?} starts at {start} instead of {want}")));
            }
            if k.degree() == 3 && t.max_power() > 0 {
                return Err(Error::Structural(format!("degree-3 trajectory {k:?} is not constant")));
            }
            if k.kprime().is_zero() && !t.limit_infinity().0 {
                return Err(Error::Structural(format!("normal trajectory {k:?} grows polynomially")));
            }
        }
        Ok(())
    }

    /// `lim_{delta -> +inf} H_⋄(delta)`, which lies in the normal-form space.
    pub fn normal_form(&self) -> Result<NormalSeries> {
        let mut out = NormalSeries::new(self.n(), self.max_degree);
        for (k, t) in &self.trajectories {
            match k.action_part() {
                Some(l) => {
                    let (finite, v) = t.limit_infinity();
                    if !finite {
                        return Err(Error::Structural(format!("normal trajectory {k:?} has no finite limit")));
                    }
                    out.add_term(l, v);
                }
                None => {
                    // H_k = e^{-omega_{k'} delta} calH_k and every exponent of
                    // calH_k is >= 0, so the product decays.
                    if !(self.freq.omega_of(&k.kprime()) > 0.0) {
                        return Err(Error::Structural(format!("{k:?} has k' != 0 but omega_k' = 0")));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Serialisable form: `[{"k", "kbar", "terms": [...]}]` in canonical order.
    pub fn to_json(&self) -> Vec<TrajectoryJson> {
        self.trajectories
            .iter()
            .map(|(k, t)| TrajectoryJson { k: k.k_vec(), kbar: k.kbar_vec(), terms: t.to_json() })
            .collect()
    }

    /// Are all trajectories constant?
    pub fn is_stationary(&self) -> bool {
        self.trajectories.values().all(|t| t.len() == 1 && t.max_power() == 0 && t.iter().all(|(_, e, _)| e.is_zero()))
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrajectoryJson {
    pub k: Vec<u32>,
    pub kbar: Vec<u32>,
    pub terms: Vec<crate::exp_poly::TermJson>,
}

/// Rebuild the trajectory map from its serialised form.
pub fn trajectories_from_json(
    items: &[TrajectoryJson],
    freq: &FrequencyVector,
) -> Result<BTreeMap<MultiIndex, ExpPolynomial>> {
    let mut out = BTreeMap::new();
    for it in items {
        if it.k.len() != freq.n() || it.kbar.len() != freq.n() {
            return Err(Error::Parse(format!("index length mismatch in {:?}/{:?}", it.k, it.kbar)));
        }
        out.insert(MultiIndex::new(&it.k, &it.kbar), ExpPolynomial::from_json(&it.terms, freq)?);
    }
    Ok(out)
}

/// Convenience: the seed coefficient map as constants.
pub fn constant_trajectories(seed: &TruncatedSeries) -> BTreeMap<MultiIndex, ExpPolynomial> {
    seed.iter().map(|(k, c)| (*k, ExpPolynomial::constant(seed.n(), *c))).collect()
}
