//! Right-hand sides of the nilpotent coefficient system.
//!
//! With `calH_k = e^{omega_{k'} delta} H_k` the flow reads
//! `d calH_k / d delta = v1_k + v2bar_k`, where
//!
//! * `v1_k = -sum_j sum_{|l|>=2} sigma_{k'} (kbar_j - k_j) l_j calH_{k + e_j - (l,l)} calH_{(l,l)}`
//! * `v2bar_k = 2 sum_j sum (lbar_j m_j - l_j mbar_j) calH_l calH_m e^{-omega_{l',m'} delta}`
//!
//! the second sum running over ordered pairs with `sigma_{l'} < 0 < sigma_{m'}`
//! and `l + m - k = e_j` (here `e_j` is the unit vector placed in both the
//! `z` and the `zbar` slot). These are `-{xi H, H^0}` and `-2i {H^-, H^+}`.

use std::collections::BTreeMap;

use crate::algebra::{ActionIndex, FrequencyVector, MultiIndex, C64};
use crate::exp_poly::{ExpPolynomial, Exponent};

/// Coefficient ring for the quadratic right-hand sides.
pub trait FlowCoefficient: Clone + Send + Sync {
    fn zero_like(n: usize) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn product(&self, other: &Self) -> Self;
    fn scaled(&self, k: f64) -> Self;
    fn is_zero(&self) -> bool;
}

impl FlowCoefficient for C64 {
    fn zero_like(_: usize) -> Self {
        C64::default()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn product(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, k: f64) -> Self {
        self * k
    }
    fn is_zero(&self) -> bool {
        *self == C64::default()
    }
}

impl FlowCoefficient for ExpPolynomial {
    fn zero_like(n: usize) -> Self {
        ExpPolynomial::zero(n)
    }
    fn add_assign(&mut self, other: &Self) {
        ExpPolynomial::add_assign(self, other);
    }
    fn product(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }
    fn is_zero(&self) -> bool {
        ExpPolynomial::is_zero(self)
    }
}

/// Immutable view of the already-solved coefficients, with the index lists
/// the two sums range over.
pub struct Snapshot<'a, T> {
    n: usize,
    freq: &'a FrequencyVector,
    values: &'a BTreeMap<MultiIndex, T>,
    normal: Vec<(ActionIndex, MultiIndex)>,
    minus: Vec<MultiIndex>,
}

impl<'a, T: FlowCoefficient> Snapshot<'a, T> {
    pub fn new(freq: &'a FrequencyVector, values: &'a BTreeMap<MultiIndex, T>) -> Self {
        let mut normal = Vec::new();
        let mut minus = Vec::new();
        for (k, v) in values {
            if v.is_zero() {
                continue;
            }
            if let Some(l) = k.action_part() {
                normal.push((l, *k));
            } else if freq.sigma(&k.kprime()) < 0 {
                minus.push(*k);
            }
        }
        Self { n: freq.n(), freq, values, normal, minus }
    }

    pub fn get(&self, k: &MultiIndex) -> Option<&T> {
        self.values.get(k)
    }

    pub fn freq(&self) -> &FrequencyVector {
        self.freq
    }

    /// Indices `k` of degree `d` that can receive a nonzero right-hand side
    /// from the stored coefficients.
    pub fn reachable(&self, d: u32) -> Vec<MultiIndex> {
        let n = self.n;
        let mut out = std::collections::BTreeSet::new();
        let units: Vec<MultiIndex> = (0..n).map(|j| unit_pair(n, j)).collect();
        // v1: k = a + (l,l) - e_j with a'_j l_j != 0
        for (l, ll) in &self.normal {
            for (a, v) in self.values.iter() {
                if v.is_zero() || a.degree() + 2 * l.degree() != d + 2 {
                    continue;
                }
                let ap = a.kprime();
                for j in 0..n {
                    if ap.get(j) != 0 && l.get(j) != 0 {
                        if let Some(k) = a.add(ll).checked_sub(&units[j]) {
                            out.insert(k);
                        }
                    }
                }
            }
        }
        // v2: k = l + m - e_j, sigma_{l'} < 0 < sigma_{m'}
        for l in &self.minus {
            for (m, v) in self.values.iter() {
                if v.is_zero() || l.degree() + m.degree() != d + 2 || self.freq.sigma(&m.kprime()) <= 0 {
                    continue;
                }
                for j in 0..n {
                    if pair_weight(l, m, j) != 0 {
                        if let Some(k) = l.add(m).checked_sub(&units[j]) {
                            out.insert(k);
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

fn unit_pair(n: usize, j: usize) -> MultiIndex {
    let mut l = vec![0; n];
    l[j] = 1;
    MultiIndex::diagonal(&l)
}

#[inline]
fn pair_weight(l: &MultiIndex, m: &MultiIndex, j: usize) -> i64 {
    l.kbar(j) as i64 * m.k(j) as i64 - l.k(j) as i64 * m.kbar(j) as i64
}

/// `v1_k` evaluated on the snapshot. The same expression holds in `H` and
/// in `calH` variables.
pub fn rhs_v1<T: FlowCoefficient>(k: &MultiIndex, snap: &Snapshot<'_, T>) -> T {
    let n = snap.n;
    let mut acc = T::zero_like(n);
    let kp = k.kprime();
    let sigma = snap.freq.sigma(&kp);
    if sigma == 0 {
        return acc;
    }
    for (l, ll) in &snap.normal {
        if 2 * l.degree() + 3 > k.degree() + 2 {
            continue;
        }
        for j in 0..n {
            let w = kp.get(j) as i64 * l.get(j) as i64;
            if w == 0 {
                continue;
            }
            let Some(a) = k.add(&unit_pair(n, j)).checked_sub(ll) else { continue };
            let Some(ha) = snap.get(&a) else { continue };
            let hl = snap.get(ll).expect("normal key present");
            acc.add_assign(&ha.product(hl).scaled(-(sigma as i64 * w) as f64));
        }
    }
    acc
}

/// `v2_k = -2i {H^-, H^+}_k` in `H` variables (no exponential weight).
pub fn rhs_v2<T: FlowCoefficient>(k: &MultiIndex, snap: &Snapshot<'_, T>) -> T {
    v2_sum(k, snap, |_, _, prod| prod)
}

/// `v2bar_k` for exp-polynomial trajectories, with the exact weight
/// `e^{-omega_{l',m'} delta}`.
pub fn rhs_v2bar(k: &MultiIndex, snap: &Snapshot<'_, ExpPolynomial>) -> ExpPolynomial {
    let freq = snap.freq;
    let kp = k.kprime();
    let sigma_k = freq.sigma(&kp);
    v2_sum(k, snap, |l, m, prod| {
        // omega_{l'} + omega_{m'} - omega_{k'} equals 2 omega_{l'} when
        // <omega,k'> >= 0 and 2 omega_{m'} otherwise.
        let e = if sigma_k >= 0 {
            Exponent::omega_q(&l.kprime(), freq).scale(2)
        } else {
            Exponent::omega_q(&m.kprime(), freq).scale(2)
        };
        debug_assert!({
            let direct = freq.omega_of(&l.kprime()) + freq.omega_of(&m.kprime()) - freq.omega_of(&kp);
            (direct - e.value()).abs() <= 1e-9 * (1.0 + direct.abs())
        });
        prod.shift_exponent(&e)
    })
}

fn v2_sum<T: FlowCoefficient>(
    k: &MultiIndex,
    snap: &Snapshot<'_, T>,
    weight: impl Fn(&MultiIndex, &MultiIndex, T) -> T,
) -> T {
    let n = snap.n;
    let mut acc = T::zero_like(n);
    for j in 0..n {
        let target = k.add(&unit_pair(n, j));
        for l in &snap.minus {
            if l.degree() + 3 > target.degree() {
                continue;
            }
            let Some(m) = target.checked_sub(l) else { continue };
            let w = pair_weight(l, &m, j);
            if w == 0 || snap.freq.sigma(&m.kprime()) <= 0 {
                continue;
            }
            let Some(hm) = snap.get(&m) else { continue };
            let hl = snap.get(l).expect("minus key present");
            let prod = hl.product(hm).scaled(2.0 * w as f64);
            acc.add_assign(&weight(l, &m, prod));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{poisson_bracket, TruncatedSeries};

    fn mi(k: &[u32], kb: &[u32]) -> MultiIndex {
        MultiIndex::new(k, kb)
    }

    fn snapshot_of(h: &TruncatedSeries) -> BTreeMap<MultiIndex, C64> {
        h.iter().map(|(k, c)| (*k, *c)).collect()
    }

    #[test]
    fn v1_matches_bracket_expansion() {
        let f = FrequencyVector::new(vec![1.0], 1e-9, 16).unwrap();
        let one = C64::new(1.0, 0.0);
        let h = TruncatedSeries::from_terms(
            1,
            8,
            3,
            [(mi(&[3], &[0]), one), (mi(&[0], &[3]), one), (mi(&[2], &[2]), one)],
        )
        .unwrap();
        let vals = snapshot_of(&h);
        let snap = Snapshot::new(&f, &vals);
        let sp = h.split_by_sign(&f);
        let diff = sp.hminus.sub(&sp.hplus).unwrap();
        let v1 = poisson_bracket(&diff, &sp.h0).unwrap().scale(C64::new(0.0, -1.0));
        for k in [mi(&[3], &[1]), mi(&[4], &[1]), mi(&[1], &[4])] {
            assert!((rhs_v1(&k, &snap) - v1.get(&k)).norm() < 1e-14, "{k:?}");
        }
        assert!(v1.get(&mi(&[4], &[1])).norm() > 0.5);
        assert_eq!(rhs_v1(&mi(&[2], &[2]), &snap), C64::default());
    }

    #[test]
    fn v2bar_fixture() {
        let f = FrequencyVector::new(vec![1.0], 1e-9, 16).unwrap();
        let c = ExpPolynomial::constant(1, C64::new(1.0, 0.0));
        let vals: BTreeMap<_, _> = [(mi(&[3], &[0]), c.clone()), (mi(&[0], &[3]), c)].into_iter().collect();
        let snap = Snapshot::new(&f, &vals);
        let v = rhs_v2bar(&mi(&[2], &[2]), &snap);
        let six = Exponent::omega_q(&crate::algebra::Lattice::from_slice(&[6]), &f);
        assert_eq!(v.len(), 1);
        assert_eq!(v.get(0, &six), C64::new(-18.0, 0.0));
        assert_eq!(snap.reachable(4), vec![mi(&[2], &[2])]);
    }
}
