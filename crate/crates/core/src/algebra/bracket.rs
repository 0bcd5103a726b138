//! Poisson bracket `{F,G} = i sum_j (d_{zbar_j}F d_{z_j}G - d_{z_j}F d_{zbar_j}G)`.

use super::frequency::FrequencyVector;
use super::index::MultiIndex;
use super::series::{TruncatedSeries, C64};
use crate::error::{Error, Result};

/// Bracket of two monomials `z^a`, `z^b` as a list of `(index, weight)`
/// with `{z^a, z^b} = i * sum weight * z^index`.
#[inline]
pub(crate) fn monomial_bracket(a: &MultiIndex, b: &MultiIndex, mut emit: impl FnMut(MultiIndex, f64)) {
    let n = a.n();
    for j in 0..n {
        let w = a.kbar(j) as i64 * b.k(j) as i64 - a.k(j) as i64 * b.kbar(j) as i64;
        if w == 0 {
            continue;
        }
        let sum = a.add(b);
        let mut l = vec![0u32; n];
        l[j] = 1;
        let idx = sum.checked_sub(&MultiIndex::diagonal(&l)).expect("weight nonzero implies both exponents present");
        emit(idx, w as f64);
    }
}

/// `{F, G}` truncated at `min(M_F, M_G)`. Terms of degrees `a`, `b`
/// contribute at degree `a + b - 2`.
pub fn poisson_bracket(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", f.n(), g.n())));
    }
    let m = f.max_degree().min(g.max_degree());
    let mut out = TruncatedSeries::new(f.n(), m);
    let rhs: Vec<(MultiIndex, C64)> = g.iter().map(|(k, c)| (*k, *c)).collect();
    let i = C64::new(0.0, 1.0);
    for (a, &ca) in f.iter() {
        if a.degree() > m + 2 {
            break;
        }
        for (b, cb) in &rhs {
            if a.degree() + b.degree() > m + 2 {
                break;
            }
            let c = i * ca * cb;
            monomial_bracket(a, b, |idx, w| out.add_term(idx, c * w));
        }
    }
    Ok(out)
}

/// `{F, H_2}`: coefficient at `k` becomes `i <omega, k'> F_k`.
pub fn bracket_with_h2(f: &TruncatedSeries, freq: &FrequencyVector) -> Result<TruncatedSeries> {
    if f.n() != freq.n() {
        return Err(Error::DimensionMismatch(format!("series n = {}, omega has {}", f.n(), freq.n())));
    }
    let omega = freq.omega();
    let i = C64::new(0.0, 1.0);
    // Same operation order as `poisson_bracket(f, H_2)`, so both agree
    // bit for bit: H_2 iterates its terms from the last coordinate down.
    Ok(f.map_coeffs(|k, c| {
        let mut acc = C64::default();
        for j in (0..k.n()).rev() {
            let w = k.kbar(j) as i64 - k.k(j) as i64;
            if w != 0 {
                acc += i * c * C64::new(omega[j], 0.0) * w as f64;
            }
        }
        acc
    })
    .into_general())
}
