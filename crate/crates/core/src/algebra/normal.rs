//! Series in the actions `kappa_j = z_j zbar_j`.

use std::collections::BTreeMap;

use super::index::{ActionIndex, Lattice};
use super::series::{TruncatedSeries, C64};
use crate::error::{Error, Result};

/// `N = sum_l N_l kappa^l`, truncated so that the z-degree `2|l|` stays
/// within `max_degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalSeries {
    n: usize,
    max_degree: u32,
    coeffs: BTreeMap<ActionIndex, C64>,
}

impl NormalSeries {
    pub fn new(n: usize, max_degree: u32) -> Self {
        Self { n, max_degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (ActionIndex, C64)>>(n: usize, max_degree: u32, terms: I) -> Self {
        let mut s = Self::new(n, max_degree);
        for (l, c) in terms {
            s.add_term(l, c);
        }
        s
    }

    pub fn constant(n: usize, max_degree: u32, c: C64) -> Self {
        Self::from_terms(n, max_degree, [(ActionIndex::zero(n), c)])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation in z-degree; the largest kappa-degree kept is half of it.
    #[inline]
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    #[inline]
    pub fn max_kappa_degree(&self) -> u32 {
        self.max_degree / 2
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, l: &ActionIndex) -> C64 {
        self.coeffs.get(l).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ActionIndex, &C64)> + '_ {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, l: ActionIndex, c: C64) {
        debug_assert_eq!(l.n(), self.n);
        if 2 * l.degree() > self.max_degree || c == C64::default() {
            return;
        }
        let e = self.coeffs.entry(l).or_default();
        *e += c;
        if *e == C64::default() {
            self.coeffs.remove(&l);
        }
    }

    pub fn with_max_degree(&self, d: u32) -> Self {
        let mut out = Self::new(self.n, d);
        for (l, &c) in &self.coeffs {
            out.add_term(*l, c);
        }
        out
    }

    pub fn map_coeffs<F: FnMut(&ActionIndex, C64) -> C64>(&self, mut f: F) -> Self {
        let mut out = Self::new(self.n, self.max_degree);
        for (l, &c) in &self.coeffs {
            out.add_term(*l, f(l, c));
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_coeffs(|_, c| c * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::new(self.n, self.max_degree.min(other.max_degree));
        for (l, &c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(*l, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Product truncated at `max_degree` (z-degree).
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::new(self.n, max_degree);
        let kmax = max_degree / 2;
        let rhs: Vec<(ActionIndex, C64)> = other.coeffs.iter().map(|(l, c)| (*l, *c)).collect();
        for (a, &ca) in &self.coeffs {
            if a.degree() > kmax {
                break;
            }
            for (b, cb) in &rhs {
                if a.degree() + b.degree() > kmax {
                    break;
                }
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, self.max_degree.min(other.max_degree))
    }

    /// `d/dkappa_j`.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::new(self.n, self.max_degree.saturating_sub(2));
        for (l, &c) in &self.coeffs {
            if let Some(low) = l.lower(j) {
                out.add_term(low, c * l.get(j) as f64);
            }
        }
        out
    }

    /// `<q, d> N = sum_j q_j dN/dkappa_j`, kept at the original truncation.
    pub fn directional(&self, q: &Lattice) -> Self {
        let mut out = Self::new(self.n, self.max_degree);
        for j in 0..self.n {
            if q.get(j) == 0 {
                continue;
            }
            for (l, &c) in &self.coeffs {
                if let Some(low) = l.lower(j) {
                    out.add_term(low, c * (l.get(j) as f64 * q.get(j) as f64));
                }
            }
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .map(|l| (self.get(l) - other.get(l)).norm())
            .fold(0.0, f64::max)
    }

    /// `sum |N_l| rho^{2|l|}`.
    pub fn polydisk_norm_upper(&self, rho: f64) -> f64 {
        self.coeffs.iter().map(|(l, c)| c.norm() * rho.powi(2 * l.degree() as i32)).fold(0.0, |a, b| a + b)
    }

    /// The series `sum N_l z^l zbar^l`.
    pub fn embed(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::new(self.n, self.max_degree);
        for (l, &c) in &self.coeffs {
            out.add_term(l.to_multi_index(), c);
        }
        out
    }

    /// Inverse of [`embed`](Self::embed); fails on any key with `k' != 0`.
    pub fn extract(h: &TruncatedSeries) -> Result<Self> {
        let mut out = Self::new(h.n(), h.max_degree());
        for (k, &c) in h.iter() {
            let l = k.action_part().ok_or_else(|| Error::Support(format!("{k:?} is not an action monomial")))?;
            out.add_term(l, c);
        }
        Ok(out)
    }
}
