//! The canonical change of variables generated by the flow.
//!
//! Along the flow `H_2 + Ĥ_⋄` is carried to `H_2 + H_⋄(·, Δ)` by the
//! time-dependent Hamiltonian vector field of `F_s = xi H_⋄(·, s)`:
//! `z' = i dF/dzbar`, `zbar' = -i dF/dz`. The map `Z` with
//! `(H_2 + Ĥ_⋄)(Z) = H_2 + H_⋄(·, Δ)` is the flow map from time `Δ` back to
//! time `0`. As a function `Psi_s` of the current point it solves the
//! linear transport equation `d Psi_s / ds = -{F_s, Psi_s}`, `Psi_0 = id`,
//! which only needs brackets, never composition.

use serde::{Deserialize, Serialize};

use super::exact::FlowSolution;
use super::rk4::default_steps;
use crate::algebra::{poisson_bracket, MultiIndex, TruncatedSeries, C64};
use crate::error::{Error, Result};
use crate::io::SeriesJson;

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalTransform {
    pub z: Vec<TruncatedSeries>,
    pub zbar: Vec<TruncatedSeries>,
    pub delta: f64,
    /// Degree `M` of the flow the transform was computed from; components
    /// are kept through `M - 1`.
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformJson {
    pub delta: f64,
    #[serde(rename = "M")]
    pub degree: u32,
    pub z: Vec<SeriesJson>,
    pub zbar: Vec<SeriesJson>,
}

fn identity(n: usize, m: u32) -> (Vec<TruncatedSeries>, Vec<TruncatedSeries>) {
    let z = (0..n).map(|j| TruncatedSeries::coordinate(n, m, j, false)).collect();
    let zb = (0..n).map(|j| TruncatedSeries::coordinate(n, m, j, true)).collect();
    (z, zb)
}

/// Integrate the transport equation with RK4 over `[0, delta]`.
/// `steps = None` uses [`default_steps`] with the largest decay rate of the
/// solution.
pub fn normalizing_transform(sol: &FlowSolution, delta: f64, steps: Option<usize>) -> Result<CanonicalTransform> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
    }
    if steps == Some(0) {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let (n, m) = (sol.n(), sol.max_degree());
    let mt = m.saturating_sub(1);
    let (mut z, mut zbar) = identity(n, mt);
    let rate = sol.trajectories().keys().map(|k| sol.freq().omega_of(&k.kprime())).fold(0.0, f64::max);
    if delta > 0.0 && !sol.trajectories().is_empty() {
        let steps = steps.unwrap_or_else(|| default_steps(delta, rate));
        let h = delta / steps as f64;
        let gen = |s: f64| sol.h_at(s).apply_xi(sol.freq()).with_max_degree(mt);
        let rhs = |f: &TruncatedSeries, psi: &[TruncatedSeries]| -> Result<Vec<TruncatedSeries>> {
            psi.iter().map(|p| Ok(poisson_bracket(f, p)?.scale(C64::new(-1.0, 0.0)))).collect()
        };
        let axpy = |x: &[TruncatedSeries], k: &[TruncatedSeries], a: f64| -> Result<Vec<TruncatedSeries>> {
            x.iter().zip(k).map(|(x, k)| x.add(&k.scale(C64::new(a, 0.0)))).collect()
        };
        for step in 0..steps {
            let s = step as f64 * h;
            let (f0, fh, f1) = (gen(s), gen(s + 0.5 * h), gen(s + h));
            let mut state: Vec<TruncatedSeries> = z.iter().chain(zbar.iter()).cloned().collect();
            let k1 = rhs(&f0, &state)?;
            let k2 = rhs(&fh, &axpy(&state, &k1, 0.5 * h)?)?;
            let k3 = rhs(&fh, &axpy(&state, &k2, 0.5 * h)?)?;
            let k4 = rhs(&f1, &axpy(&state, &k3, h)?)?;
            for i in 0..state.len() {
                let inc = k1[i].add(&k2[i].scale(C64::new(2.0, 0.0)))?.add(&k3[i].scale(C64::new(2.0, 0.0)))?.add(&k4[i])?;
                state[i] = state[i].add(&inc.scale(C64::new(h / 6.0, 0.0)))?;
            }
            zbar = state.split_off(n);
            z = state;
        }
    }
    Ok(CanonicalTransform { z, zbar, delta, degree: m })
}

impl CanonicalTransform {
    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// `max |(H_2 + seed)(Z) - (H_2 + H_⋄(·, delta))|` through degree `M - 1`.
    pub fn substitution_residual(&self, sol: &FlowSolution) -> Result<f64> {
        let mt = self.degree.saturating_sub(1);
        let h2 = TruncatedSeries::quadratic_part(sol.freq(), self.degree);
        let full_seed = h2.add(&sol.seed().clone().into_general())?;
        let lhs = full_seed.substitute(&self.z, &self.zbar, mt)?;
        let rhs = h2.add(&sol.h_at(self.delta).into_general())?.with_max_degree(mt);
        Ok(lhs.max_abs_diff_through(&rhs, mt))
    }

    /// Largest deviation of `{Zbar_l, Z_j}`, `{Z_l, Z_j}`, `{Zbar_l, Zbar_j}`
    /// from `i delta_{lj}`, `0`, `0` through degree `M - 2`.
    pub fn symplectic_residual(&self) -> Result<f64> {
        let n = self.n();
        let through = self.degree.saturating_sub(2);
        let mut worst = 0.0f64;
        for l in 0..n {
            for j in 0..n {
                let mut b = poisson_bracket(&self.zbar[l], &self.z[j])?;
                if l == j {
                    b.add_term(MultiIndex::zero(n), C64::new(0.0, -1.0));
                }
                let b2 = poisson_bracket(&self.z[l], &self.z[j])?;
                let b3 = poisson_bracket(&self.zbar[l], &self.zbar[j])?;
                for s in [b, b2, b3] {
                    for (k, c) in s.iter() {
                        if k.degree() <= through {
                            worst = worst.max(c.norm());
                        }
                    }
                }
            }
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> TransformJson {
        TransformJson {
            delta: self.delta,
            degree: self.degree,
            z: self.z.iter().map(SeriesJson::from_series).collect(),
            zbar: self.zbar.iter().map(SeriesJson::from_series).collect(),
        }
    }

    pub fn from_json(j: &TransformJson) -> Result<Self> {
        let z = j.z.iter().map(|s| s.to_series()).collect::<Result<Vec<_>>>()?;
        let zbar = j.zbar.iter().map(|s| s.to_series()).collect::<Result<Vec<_>>>()?;
        if z.len() != zbar.len() {
            return Err(Error::Parse("z and zbar component counts differ".into()));
        }
        Ok(Self { z, zbar, delta: j.delta, degree: j.degree })
    }
}
