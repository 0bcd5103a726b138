//! Multi-indices, frequencies, truncated series and the Poisson bracket.

pub mod bracket;
pub mod frequency;
pub mod index;
pub mod normal;
pub mod series;

pub use bracket::{bracket_with_h2, poisson_bracket};
pub use frequency::{FrequencyJson, FrequencyVector};
pub use index::{minimal_index, triangle, triangle_overlap, ActionIndex, HalfInt, Lattice, MultiIndex, MAX_DOF};
pub use normal::NormalSeries;
pub use series::{SignSplit, TruncatedSeries, C64, DIAMOND_MIN_DEGREE};

/// Cauchy estimate `|H_k| <= c rho^{-|k|}` for a series bounded by `c` on
/// the polydisk of radius `rho`.
pub fn cauchy_coefficient_bound(norm_bound: f64, rho: f64, k: &MultiIndex) -> f64 {
    norm_bound * rho.powi(-(k.degree() as i32))
}

/// `f << fbar`.
pub fn majorizes(f: &TruncatedSeries, fbar: &TruncatedSeries) -> bool {
    f.is_majorized_by(fbar)
}
