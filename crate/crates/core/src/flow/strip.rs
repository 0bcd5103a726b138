//! Support regions: strips in `<omega, k'>` and balls in `|k|`.

use crate::algebra::{FrequencyVector, MultiIndex, TruncatedSeries};
use crate::error::{Error, Result};

use super::exact::FlowSolution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// `lo <= <omega, k'> <= hi`; either bound may be infinite.
    Strip { lo: f64, hi: f64 },
    /// `|k| <= radius`.
    Ball { radius: u32 },
}

impl Region {
    pub fn contains(&self, k: &MultiIndex, freq: &FrequencyVector) -> bool {
        match *self {
            Region::Strip { lo, hi } => {
                let kp = k.kprime();
                // k' = 0 is exactly zero; avoid rounding for it.
                let v = if kp.is_zero() { 0.0 } else { kp.dot(freq.omega()) };
                lo <= v && v <= hi
            }
            Region::Ball { radius } => k.degree() <= radius,
        }
    }

    pub fn supports(&self, h: &TruncatedSeries, freq: &FrequencyVector) -> bool {
        h.keys().all(|k| self.contains(k, freq))
    }
}

/// Keys outside `region` whose trajectory is not identically zero.
pub fn strip_violations(sol: &FlowSolution, region: Region) -> Result<Vec<MultiIndex>> {
    if let Region::Strip { lo, hi } = region {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidParameter(format!("empty strip [{lo}, {hi}]")));
        }
    }
    if !region.supports(sol.seed(), sol.freq()) {
        return Err(Error::Support(format!("seed is not supported in {region:?}")));
    }
    Ok(sol
        .trajectories()
        .iter()
        .filter(|(k, t)| !region.contains(k, sol.freq()) && !t.is_zero())
        .map(|(k, _)| *k)
        .collect())
}

/// True iff every trajectory outside `region` is identically zero.
pub fn check_strip_invariance(sol: &FlowSolution, region: Region) -> Result<bool> {
    Ok(strip_violations(sol, region)?.is_empty())
}
