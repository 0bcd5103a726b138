//! Truncated power series in `(z, zbar)` with complex coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::frequency::FrequencyVector;
use super::index::MultiIndex;
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Lowest degree stored by elements of the "diamond" subspace `F_⋄`.
pub const DIAMOND_MIN_DEGREE: u32 = 3;

/// A power series `sum H_k z^k zbar^kbar` known through degree `max_degree`.
///
/// Zero coefficients are never stored. Keys below `min_degree` are rejected
/// on insertion, keys above `max_degree` are silently dropped (they lie
/// beyond the truncation).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    n: usize,
    max_degree: u32,
    min_degree: u32,
    coeffs: BTreeMap<MultiIndex, C64>,
}

impl TruncatedSeries {
    pub fn new(n: usize, max_degree: u32) -> Self {
        Self { n, max_degree, min_degree: 0, coeffs: BTreeMap::new() }
    }

    /// Empty element of `F_⋄`: only degrees `>= 3` may be stored.
    pub fn diamond(n: usize, max_degree: u32) -> Self {
        Self { n, max_degree, min_degree: DIAMOND_MIN_DEGREE, coeffs: BTreeMap::new() }
    }

    pub fn with_min_degree(n: usize, max_degree: u32, min_degree: u32) -> Self {
        Self { n, max_degree, min_degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I>(n: usize, max_degree: u32, min_degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        let mut s = Self::with_min_degree(n, max_degree, min_degree);
        for (k, c) in terms {
            s.insert(k, c)?;
        }
        Ok(s)
    }

    /// Single monomial `c z^k zbar^kbar` in a general (min degree 0) series.
    pub fn monomial(n: usize, max_degree: u32, k: MultiIndex, c: C64) -> Self {
        let mut s = Self::new(n, max_degree);
        s.add_term(k, c);
        s
    }

    /// `H_2 = sum_j omega_j z_j zbar_j`.
    pub fn quadratic_part(freq: &FrequencyVector, max_degree: u32) -> Self {
        let n = freq.n();
        let mut s = Self::new(n, max_degree);
        for (j, &w) in freq.omega().iter().enumerate() {
            let mut l = vec![0; n];
            l[j] = 1;
            s.add_term(MultiIndex::diagonal(&l), C64::new(w, 0.0));
        }
        s
    }

    /// The coordinate function `z_j` (or `zbar_j`).
    pub fn coordinate(n: usize, max_degree: u32, j: usize, conjugate_slot: bool) -> Self {
        let k = if conjugate_slot { MultiIndex::unit_zbar(n, j) } else { MultiIndex::unit_z(n, j) };
        Self::monomial(n, max_degree, k, C64::new(1.0, 0.0))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    #[inline]
    pub fn min_degree(&self) -> u32 {
        self.min_degree
    }

    pub fn is_diamond(&self) -> bool {
        self.min_degree >= DIAMOND_MIN_DEGREE
    }

    /// Re-tag as a diamond series; fails if a stored key has degree < 3.
    pub fn into_diamond(mut self) -> Result<Self> {
        if let Some(k) = self.coeffs.keys().find(|k| k.degree() < DIAMOND_MIN_DEGREE) {
            return Err(Error::Support(format!("diamond series cannot hold degree {} term {:?}", k.degree(), k)));
        }
        self.min_degree = DIAMOND_MIN_DEGREE;
        Ok(self)
    }

    /// Drop the min-degree tag.
    pub fn into_general(mut self) -> Self {
        self.min_degree = 0;
        self
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, k: &MultiIndex) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> + '_ {
        self.coeffs.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &MultiIndex> + '_ {
        self.coeffs.keys()
    }

    /// Checked insertion (replaces any existing coefficient).
    pub fn insert(&mut self, k: MultiIndex, c: C64) -> Result<()> {
        if k.n() != self.n {
            return Err(Error::DimensionMismatch(format!("index {:?} has n = {}, series has n = {}", k, k.n(), self.n)));
        }
        if k.degree() < self.min_degree && c != C64::default() {
            return Err(Error::Support(format!(
                "term {:?} of degree {} below the minimum degree {}",
                k,
                k.degree(),
                self.min_degree
            )));
        }
        if k.degree() > self.max_degree {
            return Ok(());
        }
        if c == C64::default() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
        Ok(())
    }

    /// Like [`add_term`](Self::add_term) but reports keys below the minimum
    /// degree or with the wrong dimension instead of asserting.
    pub fn add_term_checked(&mut self, k: MultiIndex, c: C64) -> Result<()> {
        if k.n() != self.n {
            return Err(Error::DimensionMismatch(format!("index {:?} has n = {}, series has n = {}", k, k.n(), self.n)));
        }
        if k.degree() < self.min_degree && c != C64::default() {
            return Err(Error::Support(format!("term {:?} below the minimum degree {}", k, self.min_degree)));
        }
        self.add_term(k, c);
        Ok(())
    }

    /// Accumulate `c` into the coefficient at `k`. Terms beyond the
    /// truncation are dropped.
    pub fn add_term(&mut self, k: MultiIndex, c: C64) {
        debug_assert_eq!(k.n(), self.n);
        if k.degree() > self.max_degree || c == C64::default() {
            return;
        }
        debug_assert!(k.degree() >= self.min_degree, "term {:?} below min degree {}", k, self.min_degree);
        let entry = self.coeffs.entry(k).or_default();
        *entry += c;
        if *entry == C64::default() {
            self.coeffs.remove(&k);
        }
    }

    pub fn map_coeffs<F: FnMut(&MultiIndex, C64) -> C64>(&self, mut f: F) -> Self {
        let mut out = Self::with_min_degree(self.n, self.max_degree, self.min_degree);
        for (k, &c) in &self.coeffs {
            let v = f(k, c);
            if v != C64::default() {
                out.coeffs.insert(*k, v);
            }
        }
        out
    }

    pub fn filter<F: FnMut(&MultiIndex) -> bool>(&self, mut keep: F) -> Self {
        let mut out = Self::with_min_degree(self.n, self.max_degree, self.min_degree);
        for (k, &c) in &self.coeffs {
            if keep(k) {
                out.coeffs.insert(*k, c);
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_coeffs(|_, c| c * s)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", self.n, other.n)));
        }
        Ok(())
    }

    /// Sum, truncated at the smaller of the two truncation degrees.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.max_degree.min(other.max_degree);
        let mut out = Self::with_min_degree(self.n, m, self.min_degree.min(other.min_degree));
        for (k, &c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Product, truncated at the smaller truncation degree.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.max_degree.min(other.max_degree);
        let min = if self.is_diamond() && other.is_diamond() { DIAMOND_MIN_DEGREE } else { 0 };
        let mut out = Self::with_min_degree(self.n, m, min);
        let rhs: Vec<(MultiIndex, C64)> = other.coeffs.iter().map(|(k, c)| (*k, *c)).collect();
        for (a, &ca) in &self.coeffs {
            if a.degree() > m {
                break;
            }
            for (b, cb) in &rhs {
                if a.degree() + b.degree() > m {
                    break;
                }
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// `d/dz_j`. The result is a general series (min degree 0) truncated one
    /// degree lower.
    pub fn derivative_z(&self, j: usize) -> Self {
        let unit = MultiIndex::unit_z(self.n, j);
        self.derivative_along(j, unit, false)
    }

    /// `d/dzbar_j`.
    pub fn derivative_zbar(&self, j: usize) -> Self {
        let unit = MultiIndex::unit_zbar(self.n, j);
        self.derivative_along(j, unit, true)
    }

    fn derivative_along(&self, j: usize, unit: MultiIndex, bar: bool) -> Self {
        let mut out = Self::new(self.n, self.max_degree.saturating_sub(1));
        for (k, &c) in &self.coeffs {
            let e = if bar { k.kbar(j) } else { k.k(j) };
            if e == 0 {
                continue;
            }
            let lowered = k.checked_sub(&unit).expect("exponent positive");
            out.add_term(lowered, c * e as f64);
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        let mut out = self.filter(|k| k.degree() == d);
        out.min_degree = 0;
        out
    }

    /// Drop all terms of degree above `d` and lower the truncation to `d`.
    pub fn truncated(&self, d: u32) -> Self {
        let mut out = self.filter(|k| k.degree() <= d);
        out.max_degree = d.min(self.max_degree);
        out
    }

    /// Change the nominal truncation degree (only lowers the content).
    pub fn with_max_degree(&self, d: u32) -> Self {
        let mut out = self.filter(|k| k.degree() <= d);
        out.max_degree = d;
        out
    }

    /// Remove coefficients with `|c| < eps`.
    pub fn purged(&self, eps: f64) -> Self {
        self.filter(|k| self.get(k).norm() >= eps)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max_k |self_k - other_k|` over all stored keys of both, restricted to
    /// degrees `<= through`.
    pub fn max_abs_diff_through(&self, other: &Self, through: u32) -> f64 {
        let mut d = 0.0f64;
        for k in self.coeffs.keys().chain(other.coeffs.keys()) {
            if k.degree() <= through {
                d = d.max((self.get(k) - other.get(k)).norm());
            }
        }
        d
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.max_abs_diff_through(other, u32::MAX)
    }

    /// `H o I^±` where `I^±(z, zbar) = ±(zbar, z)`: swap `k <-> kbar`, and
    /// for `I^-` multiply by `(-1)^{|k|}`.
    pub fn involution(&self, plus: bool) -> Self {
        let mut out = Self::with_min_degree(self.n, self.max_degree, self.min_degree);
        for (k, &c) in &self.coeffs {
            let sign = if !plus && k.degree() % 2 == 1 { -1.0 } else { 1.0 };
            out.coeffs.insert(k.conjugate(), c * sign);
        }
        out
    }

    /// Reality condition `conj(H_k) = H_{k*}` up to `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect() <= tol
    }

    /// `max_k |conj(H_k) - H_{k*}|`.
    pub fn reality_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| (c.conj() - self.get(&k.conjugate())).norm())
            .fold(0.0, f64::max)
    }

    /// `sum_k |H_k| rho^{|k|}`, an upper bound for the sup norm on the
    /// polydisk of radius `rho`.
    pub fn polydisk_norm_upper(&self, rho: f64) -> f64 {
        self.coeffs.iter().map(|(k, c)| c.norm() * rho.powi(k.degree() as i32)).fold(0.0, |a, b| a + b)
    }

    /// `self << bar`: `bar` has nonnegative real coefficients and
    /// `|self_k| <= bar_k` for every stored key.
    pub fn is_majorized_by(&self, bar: &Self) -> bool {
        let nonneg = bar.coeffs.values().all(|c| c.im == 0.0 && c.re >= 0.0);
        nonneg && self.coeffs.iter().all(|(k, c)| c.norm() <= bar.get(k).re)
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn vanishing_order(&self) -> Option<u32> {
        self.coeffs.keys().next().map(|k| k.degree())
    }

    /// Substitute `z_j -> z_sub[j]`, `zbar_j -> zbar_sub[j]` and truncate the
    /// result at `max_degree`. All substituted series must vanish at the
    /// origin for the truncation to be exact.
    pub fn substitute(&self, z_sub: &[TruncatedSeries], zbar_sub: &[TruncatedSeries], max_degree: u32) -> Result<Self> {
        if z_sub.len() != self.n || zbar_sub.len() != self.n {
            return Err(Error::DimensionMismatch("substitution needs n components for z and zbar".into()));
        }
        let target_n = z_sub.first().map(|s| s.n).unwrap_or(self.n);
        for s in z_sub.iter().chain(zbar_sub) {
            if s.n != target_n {
                return Err(Error::DimensionMismatch("substitution components disagree on n".into()));
            }
            if s.coeffs.keys().any(|k| k.degree() == 0) {
                return Err(Error::InvalidParameter("substituted series must vanish at the origin".into()));
            }
        }
        let one = Self::monomial(target_n, max_degree, MultiIndex::zero(target_n), C64::new(1.0, 0.0));
        let mut powers = PowerCache::new(z_sub, zbar_sub, max_degree, one.clone());
        let mut out = Self::new(target_n, max_degree);
        for (k, &c) in &self.coeffs {
            if k.degree() > max_degree {
                break;
            }
            let mut term = one.clone();
            for j in 0..self.n {
                if k.k(j) > 0 {
                    term = term.mul(powers.get(j, false, k.k(j)))?;
                }
                if k.kbar(j) > 0 {
                    term = term.mul(powers.get(j, true, k.kbar(j)))?;
                }
            }
            for (m, &v) in &term.coeffs {
                out.add_term(*m, v * c);
            }
        }
        Ok(out)
    }

}

struct PowerCache<'a> {
    z: &'a [TruncatedSeries],
    zbar: &'a [TruncatedSeries],
    max_degree: u32,
    one: TruncatedSeries,
    cache: BTreeMap<(usize, bool, u32), TruncatedSeries>,
}

impl<'a> PowerCache<'a> {
    fn new(z: &'a [TruncatedSeries], zbar: &'a [TruncatedSeries], max_degree: u32, one: TruncatedSeries) -> Self {
        Self { z, zbar, max_degree, one, cache: BTreeMap::new() }
    }

    fn get(&mut self, j: usize, bar: bool, p: u32) -> &TruncatedSeries {
        if !self.cache.contains_key(&(j, bar, p)) {
            let base = if bar { &self.zbar[j] } else { &self.z[j] };
            let base = base.with_max_degree(self.max_degree).into_general();
            let value = if p == 0 {
                self.one.clone()
            } else {
                let prev = self.get(j, bar, p - 1).clone();
                prev.mul(&base).expect("same n")
            };
            self.cache.insert((j, bar, p), value);
        }
        &self.cache[&(j, bar, p)]
    }
}

/// Partition of a diamond series by the sign of `<omega, k'>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignSplit {
    /// Terms with `k' = 0`.
    pub h0: TruncatedSeries,
    /// Terms with `<omega, k'> > 0`.
    pub hplus: TruncatedSeries,
    /// Terms with `<omega, k'> < 0`.
    pub hminus: TruncatedSeries,
}

impl TruncatedSeries {
    pub fn split_by_sign(&self, freq: &FrequencyVector) -> SignSplit {
        let h0 = self.filter(|k| k.kprime().is_zero());
        let hplus = self.filter(|k| freq.sigma(&k.kprime()) > 0);
        let hminus = self.filter(|k| freq.sigma(&k.kprime()) < 0);
        SignSplit { h0, hplus, hminus }
    }

    /// `xi H = -i sum sigma_{k'} H_k z^k = i (H^- - H^+)`.
    pub fn apply_xi(&self, freq: &FrequencyVector) -> Self {
        self.map_coeffs(|k, c| {
            let s = freq.sigma(&k.kprime()) as f64;
            C64::new(0.0, -s) * c
        })
    }
}
