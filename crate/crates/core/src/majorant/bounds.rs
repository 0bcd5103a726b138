use crate::algebra::{MultiIndex, TruncatedSeries, C64};
use crate::error::{Error, Result};

/// `F << a rho zeta^s / (rho - zeta)` with `zeta = sum_j (z_j + zbar_j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricMajorant {
    pub a: f64,
    pub s: u32,
    pub rho: f64,
}

/// `a = ||H||_rho / rho^s` with `s` the vanishing order of `H`.
pub fn geometric_majorant(h: &TruncatedSeries, rho: f64) -> Result<GeometricMajorant> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be > 0, got {rho}")));
    }
    let s = h.vanishing_order().ok_or(Error::ZeroSeries)?;
    Ok(GeometricMajorant { a: h.polydisk_norm_upper(rho) / rho.powi(s as i32), s, rho })
}

/// Every multi-index in `n` degrees of freedom with `lo <= |k| <= hi`.
pub fn all_indices(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    fn rec(slots: &mut Vec<u32>, j: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if j + 1 == slots.len() {
            slots[j] = left;
            out.push(slots.clone());
            return;
        }
        for x in 0..=left {
            slots[j] = x;
            rec(slots, j + 1, left - x, out);
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        let mut raw = Vec::new();
        rec(&mut vec![0; 2 * n], 0, d, &mut raw);
        out.extend(raw.into_iter().map(|v| MultiIndex::new(&v[..n], &v[n..])));
    }
    out
}

fn multinomial(k: &MultiIndex) -> f64 {
    let mut acc = 1.0;
    let mut total = 0u32;
    for e in k.k_vec().into_iter().chain(k.kbar_vec()) {
        for i in 1..=e {
            total += 1;
            acc *= total as f64 / i as f64;
        }
    }
    acc
}

/// `sum_j c_j zeta^j` expanded in the `2n` variables and truncated at `m`.
pub fn zeta_series(n: usize, m: u32, coeffs: &[f64]) -> TruncatedSeries {
    let mut out = TruncatedSeries::new(n, m);
    for (j, &c) in coeffs.iter().enumerate().take(m as usize + 1) {
        if c == 0.0 {
            continue;
        }
        for k in all_indices(n, j as u32, j as u32) {
            out.add_term(k, C64::new(c * multinomial(&k), 0.0));
        }
    }
    out
}

/// The majorant `a rho zeta^s / (rho - zeta) = sum_{j >= s} a rho^{s-j} zeta^j`
/// through degree `m`.
pub fn geometric_majorant_series(g: &GeometricMajorant, n: usize, m: u32) -> TruncatedSeries {
    let coeffs: Vec<f64> =
        (0..=m).map(|j| if j < g.s { 0.0 } else { g.a * g.rho.powi(g.s as i32 - j as i32) }).collect();
    zeta_series(n, m, &coeffs)
}

/// Upper bound for `zeta(gamma) = sum n^{-gamma}`: partial sum to 1000
/// plus the integral of the tail.
pub fn riemann_zeta_upper(gamma: f64) -> f64 {
    const K: u32 = 1000;
    let head: f64 = (1..=K).rev().map(|n| (n as f64).powf(-gamma)).sum();
    head + (K as f64).powf(1.0 - gamma) / (gamma - 1.0)
}

/// `(S_gamma(N), 2 (2/N)^gamma zeta(gamma))` with
/// `S_gamma(N) = sum_{n1 + n2 = N} n1^{-gamma} n2^{-gamma}`.
pub fn s_gamma(gamma: f64, big_n: u64) -> Result<(f64, f64)> {
    if !(gamma >= 2.0) || big_n < 2 {
        return Err(Error::InvalidParameter(format!("need gamma >= 2 and N >= 2, got {gamma}, {big_n}")));
    }
    let value = (1..big_n).map(|a| ((a * (big_n - a)) as f64).powf(-gamma)).sum();
    let bound = 2.0 * (2.0 / big_n as f64).powf(gamma) * riemann_zeta_upper(gamma);
    Ok((value, bound))
}

/// `(rho / mu)^{2n} ||F||_rho`, valid for every sub-series at radius `rho - mu`.
pub fn subseries_norm_bound(f: &TruncatedSeries, rho: f64, mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < rho) {
        return Err(Error::InvalidParameter(format!("need 0 < mu < rho, got mu = {mu}, rho = {rho}")));
    }
    Ok((rho / mu).powi(2 * f.n() as i32) * f.polydisk_norm_upper(rho))
}

/// `c_F s^beta m^{-beta} rho^{s-m}` with `rho = e^{-beta/s} R`.
pub fn coefficient_tail_bound(c_f: f64, r: f64, s: u32, beta: u32, m: u32) -> Result<f64> {
    if m < s || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("need m >= s and R > 0, got m = {m}, s = {s}, R = {r}")));
    }
    if s == 0 && beta > 0 {
        return Err(Error::InvalidParameter("s = 0 requires beta = 0".into()));
    }
    if beta == 0 {
        return Ok(c_f * r.powi(s as i32 - m as i32));
    }
    let (s, beta, m) = (s as f64, beta as f64, m as f64);
    let rho = (-beta / s).exp() * r;
    Ok(c_f * (s / m).powf(beta) * rho.powf(s - m))
}
