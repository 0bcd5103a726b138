//! Exact coefficient trajectories `sum c delta^s e^{-nu delta}`.
//!
//! Every exponent that arises in the flow is a sum of terms
//! `omega_q = |<omega, q>|` with integer `q`. Each such term is stored as
//! the sign-normalised vector `sigma_q q`, and the sum of these vectors is
//! kept as the exponent. Then `nu = <omega, Q>` and, because every summand
//! has a positive inner product with `omega`, `nu = 0` holds exactly when
//! `Q = 0`. The floating value of `nu` is cached and only used for
//! evaluation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{FrequencyVector, Lattice, C64};
use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped by [`ExpPolynomial::purged`].
pub const PURGE_EPS: f64 = 1e-300;

/// An exponent `nu >= 0` with an exact integer certificate `Q`.
#[derive(Clone, Copy, Debug)]
pub struct Exponent {
    q: Lattice,
    nu: f64,
}

impl PartialEq for Exponent {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Exponent {}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q.cmp(&other.q)
    }
}

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Self { q: Lattice::zero(n), nu: 0.0 }
    }

    /// `omega_q` for a lattice vector `q` (either sign).
    pub fn omega_q(q: &Lattice, freq: &FrequencyVector) -> Self {
        let v = q.dot(freq.omega());
        if v < 0.0 {
            Self { q: q.neg(), nu: -v }
        } else {
            Self { q: *q, nu: v }
        }
    }

    /// Rebuild from a stored certificate, recomputing `nu`. Rejects a
    /// vector with negative inner product.
    pub fn from_certificate(q: Lattice, freq: &FrequencyVector) -> Result<Self> {
        let nu = q.dot(freq.omega());
        if nu < 0.0 || (nu == 0.0 && !q.is_zero()) {
            return Err(Error::Parse(format!("exponent certificate {q:?} has <omega,Q> = {nu}")));
        }
        Ok(Self { q, nu })
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn value(&self) -> f64 {
        self.nu
    }

    pub fn certificate(&self) -> &Lattice {
        &self.q
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { q: self.q.add(&other.q), nu: self.nu + other.nu }
    }

    pub fn scale(&self, k: i32) -> Self {
        debug_assert!(k >= 0);
        Self { q: self.q.scale(k), nu: self.nu * k as f64 }
    }
}

/// Finite sum `sum c_{s,nu} delta^s e^{-nu delta}` in canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolynomial {
    n: usize,
    terms: BTreeMap<(Exponent, u32), C64>,
}

/// Serialised trajectory term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub s: u32,
    pub nu_atoms: Vec<Vec<i32>>,
    pub re: f64,
    pub im: f64,
}

impl ExpPolynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C64) -> Self {
        Self::term(n, 0, Exponent::zero(n), c)
    }

    pub fn term(n: usize, s: u32, e: Exponent, c: C64) -> Self {
        let mut out = Self::zero(n);
        out.add_term(s, e, c);
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(s, exponent, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Exponent, C64)> + '_ {
        self.terms.iter().map(|((e, s), c)| (*s, e, *c))
    }

    pub fn add_term(&mut self, s: u32, e: Exponent, c: C64) {
        if c == C64::default() {
            return;
        }
        let key = (e, s);
        let v = self.terms.entry(key).or_default();
        *v += c;
        if *v == C64::default() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (&(e, s), &c) in &other.terms {
            self.add_term(s, e, c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = Self::zero(self.n);
        if k == C64::default() {
            return out;
        }
        for (&key, &c) in &self.terms {
            let v = c * k;
            if v != C64::default() {
                out.terms.insert(key, v);
            }
        }
        out
    }

    /// Multiply by `e^{-nu delta}`.
    pub fn shift_exponent(&self, e: &Exponent) -> Self {
        let mut out = Self::zero(self.n);
        for (&(f, s), &c) in &self.terms {
            out.terms.insert((f.add(e), s), c);
        }
        out
    }

    /// Termwise product: powers add, exponents add, coefficients multiply.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (&(ea, sa), &ca) in &self.terms {
            for (&(eb, sb), &cb) in &other.terms {
                out.add_term(sa + sb, ea.add(&eb), ca * cb);
            }
        }
        out
    }

    /// `F(delta) = int_0^delta a(lambda) d lambda`.
    ///
    /// Panics on a negative exponent, which cannot arise from the flow.
    pub fn integrate(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (&(e, s), &c) in &self.terms {
            assert!(e.nu >= 0.0, "negative exponent {:?} in trajectory", e.q);
            if e.is_zero() {
                out.add_term(s + 1, e, c / (s as f64 + 1.0));
                continue;
            }
            // int_0^delta t^s e^{-nu t} dt
            //   = s!/nu^{s+1} - e^{-nu delta} sum_j s!/(j! nu^{s-j+1}) delta^j
            let nu = e.nu;
            let mut fact_s = 1.0;
            for i in 1..=s {
                fact_s *= i as f64;
            }
            out.add_term(0, Exponent::zero(self.n), c * (fact_s / nu.powi(s as i32 + 1)));
            let mut ratio = fact_s; // s!/j!
            for j in 0..=s {
                if j > 0 {
                    ratio /= j as f64;
                }
                out.add_term(j, e, -c * (ratio / nu.powi((s - j) as i32 + 1)));
            }
        }
        out
    }

    /// `d/d delta`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (&(e, s), &c) in &self.terms {
            if s > 0 {
                out.add_term(s - 1, e, c * s as f64);
            }
            if !e.is_zero() {
                out.add_term(s, e, -c * e.nu);
            }
        }
        out
    }

    pub fn eval(&self, delta: f64) -> C64 {
        let mut acc = C64::default();
        for (&(e, s), &c) in &self.terms {
            let p = if s == 0 { 1.0 } else { delta.powi(s as i32) };
            let x = if e.is_zero() { 1.0 } else { (-e.nu * delta).exp() };
            acc += c * (p * x);
        }
        acc
    }

    /// `(finite, value)` of the limit `delta -> +inf`.
    pub fn limit_infinity(&self) -> (bool, C64) {
        let finite = self.terms.keys().all(|(e, s)| !e.is_zero() || *s == 0);
        (finite, self.get(0, &Exponent::zero(self.n)))
    }

    pub fn get(&self, s: u32, e: &Exponent) -> C64 {
        self.terms.get(&(*e, s)).copied().unwrap_or_default()
    }

    /// The `nu = 0` terms (a polynomial in `delta`).
    pub fn polynomial_part(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (&(e, s), &c) in &self.terms {
            if e.is_zero() {
                out.terms.insert((e, s), c);
            }
        }
        out
    }

    /// The terms with `nu > 0`.
    pub fn decaying_part(&self) -> Self {
        self.sub(&self.polynomial_part())
    }

    pub fn max_power(&self) -> u32 {
        self.terms.keys().map(|(_, s)| *s).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn purged(&self, eps: f64) -> Self {
        let mut out = Self::zero(self.n);
        for (&key, &c) in &self.terms {
            if c.norm() >= eps {
                out.terms.insert(key, c);
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (&key, &c) in &self.terms {
            out.terms.insert(key, c.conj());
        }
        out
    }

    /// Largest coefficient difference after matching terms, a structural
    /// comparison independent of `delta`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs_coeff()
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(&(e, s), c)| TermJson {
                s,
                nu_atoms: if e.is_zero() { vec![] } else { vec![e.q.as_slice().to_vec()] },
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    /// Parse terms; atoms are sign-normalised and summed.
    pub fn from_json(terms: &[TermJson], freq: &FrequencyVector) -> Result<Self> {
        let n = freq.n();
        let mut out = Self::zero(n);
        for t in terms {
            let mut e = Exponent::zero(n);
            for atom in &t.nu_atoms {
                if atom.len() != n {
                    return Err(Error::Parse(format!("exponent atom {atom:?} has the wrong length")));
                }
                let q = Lattice::from_slice(atom);
                if q.is_zero() {
                    return Err(Error::Parse("zero exponent atom".into()));
                }
                e = e.add(&Exponent::omega_q(&q, freq));
            }
            let e = Exponent::from_certificate(*e.certificate(), freq)?;
            out.add_term(t.s, e, C64::new(t.re, t.im));
        }
        Ok(out)
    }
}
