//! `dHbar/ddelta = 4 sum_j d_{z_j}Hbar d_{zbar_j}Hbar`, truncated.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{MultiIndex, TruncatedSeries, C64};
use crate::error::{Error, Result};

/// The majorant vector field compiled on the support closure of a seed.
#[derive(Clone, Debug)]
pub struct MajorantField {
    n: usize,
    max_degree: u32,
    basis: Vec<MultiIndex>,
    triples: Vec<(u32, u32, u32, f64)>,
}

/// `d_{z_j} z^a * d_{zbar_j} z^b` contributes `4 a_j bbar_j` at `a + b - (e_j, e_j)`.
fn product_terms(a: &MultiIndex, b: &MultiIndex, mut emit: impl FnMut(MultiIndex, f64)) {
    for j in 0..a.n() {
        let w = a.k(j) as f64 * b.kbar(j) as f64;
        if w == 0.0 {
            continue;
        }
        let mut l = vec![0u32; a.n()];
        l[j] = 1;
        let out = a.add(b).checked_sub(&MultiIndex::diagonal(&l)).expect("both exponents present");
        emit(out, 4.0 * w);
    }
}

impl MajorantField {
    pub fn build(seed: &TruncatedSeries) -> Result<Self> {
        if let Some((k, c)) = seed.iter().find(|(_, c)| c.im != 0.0 || c.re < 0.0) {
            return Err(Error::InvalidParameter(format!("majorant seed has coefficient {c} at {k:?}")));
        }
        let (n, m) = (seed.n(), seed.max_degree());
        let mut basis: Vec<MultiIndex> = Vec::new();
        let mut index: BTreeMap<MultiIndex, usize> = BTreeMap::new();
        let mut queue: Vec<MultiIndex> = seed.keys().copied().collect();
        let mut seen: BTreeSet<MultiIndex> = queue.iter().copied().collect();
        let mut raw = Vec::new();
        while let Some(k) = queue.pop() {
            let id = basis.len();
            index.insert(k, id);
            basis.push(k);
            for other in 0..=id {
                let b = basis[other];
                if k.degree() + b.degree() > m + 2 {
                    continue;
                }
                let orders: &[(usize, usize)] = if other == id { &[(id, id)] } else { &[(id, other), (other, id)] };
                for &(ia, ib) in orders {
                    product_terms(&basis[ia], &basis[ib], |out, w| {
                        if out.degree() > m {
                            return;
                        }
                        if seen.insert(out) {
                            queue.push(out);
                        }
                        raw.push((ia as u32, ib as u32, out, w));
                    });
                }
            }
        }
        let triples = raw.into_iter().map(|(a, b, out, w)| (a, b, index[&out] as u32, w)).collect();
        Ok(Self { n, max_degree: m, basis, triples })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn state_of(&self, h: &TruncatedSeries) -> Vec<f64> {
        self.basis.iter().map(|k| h.get(k).re).collect()
    }

    pub fn series_of(&self, x: &[f64]) -> TruncatedSeries {
        let mut out = TruncatedSeries::new(self.n, self.max_degree);
        for (k, &v) in self.basis.iter().zip(x) {
            out.add_term(*k, C64::new(v, 0.0));
        }
        out
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(a, b, k, w) in &self.triples {
            out[k as usize] += w * x[a as usize] * x[b as usize];
        }
    }

    pub fn step(&self, x: &mut [f64], h: f64) {
        let d = x.len();
        let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        self.eval(x, &mut k1);
        for i in 0..d {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        self.eval(&tmp, &mut k2);
        for i in 0..d {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        self.eval(&tmp, &mut k3);
        for i in 0..d {
            tmp[i] = x[i] + h * k3[i];
        }
        self.eval(&tmp, &mut k4);
        for i in 0..d {
            x[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
    }
}

/// `Hbar(delta)` by RK4 in `steps` equal steps.
pub fn majorant_flow(seed: &TruncatedSeries, delta: f64, steps: usize) -> Result<TruncatedSeries> {
    if !(delta >= 0.0) || steps == 0 {
        return Err(Error::InvalidParameter("need delta >= 0 and steps >= 1".into()));
    }
    let field = MajorantField::build(seed)?;
    let mut x = field.state_of(seed);
    let h = delta / steps as f64;
    for _ in 0..steps {
        field.step(&mut x, h);
    }
    Ok(field.series_of(&x))
}

/// `Hbar` at sorted checkpoints, step at most `1 / steps_per_unit`.
pub fn majorant_flow_checkpoints(seed: &TruncatedSeries, deltas: &[f64], steps_per_unit: usize) -> Result<Vec<TruncatedSeries>> {
    if deltas.iter().any(|d| !(*d >= 0.0)) || deltas.windows(2).any(|w| w[1] < w[0]) || steps_per_unit == 0 {
        return Err(Error::InvalidParameter("checkpoints must be nonnegative and sorted".into()));
    }
    let field = MajorantField::build(seed)?;
    let mut x = field.state_of(seed);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(deltas.len());
    for &target in deltas {
        let span = target - t;
        if span > 0.0 {
            let steps = (span * steps_per_unit as f64).ceil().max(1.0) as usize;
            for _ in 0..steps {
                field.step(&mut x, span / steps as f64);
            }
        }
        t = target;
        out.push(field.series_of(&x));
    }
    Ok(out)
}

/// Keys where `|h_k| > hbar_k (1 + rel) + rel`; `rel` absorbs rounding.
pub fn domination_violations(h: &TruncatedSeries, hbar: &TruncatedSeries, rel: f64) -> Vec<MultiIndex> {
    h.iter()
        .filter(|(k, c)| {
            let b = hbar.get(k);
            b.im != 0.0 || c.norm() > b.re * (1.0 + rel) + rel
        })
        .map(|(k, _)| *k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn zero_and_negative() {
        let z = TruncatedSeries::diamond(1, 6);
        assert!(majorant_flow(&z, 1.0, 10).unwrap().is_empty());
        let neg = TruncatedSeries::monomial(1, 6, MultiIndex::new(&[3], &[0]), c(-1.0));
        assert!(majorant_flow(&neg, 1.0, 10).is_err());
    }

    #[test]
    fn single_variable_closed_form() {
        // Hbar(0) = z^3 + zbar^3 at M = 4: the only new term is
        // 4 (3 z^2)(3 zbar^2) delta = 36 delta z^2 zbar^2.
        let mut s = TruncatedSeries::diamond(1, 4);
        s.add_term(MultiIndex::new(&[3], &[0]), c(1.0));
        s.add_term(MultiIndex::new(&[0], &[3]), c(1.0));
        let out = majorant_flow(&s, 0.5, 50).unwrap();
        assert!((out.get(&MultiIndex::new(&[2], &[2])).re - 18.0).abs() < 1e-12);
        assert_eq!(out.get(&MultiIndex::new(&[3], &[0])).re, 1.0);
    }

    #[test]
    fn nondecreasing() {
        let mut s = TruncatedSeries::diamond(2, 7);
        s.add_term(MultiIndex::new(&[2, 0], &[0, 1]), c(0.3));
        s.add_term(MultiIndex::new(&[0, 1], &[1, 1]), c(0.2));
        s.add_term(MultiIndex::new(&[1, 0], &[2, 0]), c(0.4));
        let outs = majorant_flow_checkpoints(&s, &[0.0, 0.5, 1.0, 2.0], 100).unwrap();
        for w in outs.windows(2) {
            for (k, v) in w[0].iter() {
                assert!(w[1].get(k).re >= v.re, "{k:?}");
            }
        }
        assert!(outs[3].len() > s.len());
    }
}
