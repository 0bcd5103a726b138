//! The decomposition `H_⋄ = sum_q z^{k_q} N^q` with `N^q` in the actions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{minimal_index, ActionIndex, FrequencyVector, Lattice, NormalSeries, TruncatedSeries, C64};
use crate::error::{Error, Result};
use crate::io::{kappa_map, normal_from_kappa_map};

/// `{q -> N^q}`. The component `N^q` is truncated at z-degree `M - |k_q|`
/// so that `z^{k_q} N^q` stays within degree `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedHamiltonian {
    n: usize,
    max_degree: u32,
    components: BTreeMap<Lattice, NormalSeries>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub q: Vec<i32>,
    #[serde(rename = "N")]
    pub coeffs: BTreeMap<String, [f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedJson {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: u32,
    pub components: Vec<ComponentJson>,
}

/// z-degree budget left for `N^q`.
pub fn component_degree(q: &Lattice, m: u32) -> u32 {
    m.saturating_sub(q.l1())
}

impl GradedHamiltonian {
    pub fn new(n: usize, max_degree: u32) -> Self {
        Self { n, max_degree, components: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn components(&self) -> &BTreeMap<Lattice, NormalSeries> {
        &self.components
    }

    /// `N^q`, empty when absent.
    pub fn get(&self, q: &Lattice) -> NormalSeries {
        self.components
            .get(q)
            .cloned()
            .unwrap_or_else(|| NormalSeries::new(self.n, component_degree(q, self.max_degree)))
    }

    /// Set `N^q` (re-truncated to the component budget). Empty series are
    /// removed.
    pub fn set(&mut self, q: Lattice, nq: NormalSeries) {
        let nq = nq.with_max_degree(component_degree(&q, self.max_degree));
        if nq.is_empty() {
            self.components.remove(&q);
        } else {
            self.components.insert(q, nq);
        }
    }

    pub fn add_term(&mut self, q: Lattice, l: ActionIndex, c: C64) {
        let budget = component_degree(&q, self.max_degree);
        let n = self.n;
        let entry = self.components.entry(q).or_insert_with(|| NormalSeries::new(n, budget));
        entry.add_term(l, c);
        if entry.is_empty() {
            self.components.remove(&q);
        }
    }

    /// Checks the degree constraints: `z^{k_q} N^q = O_3(z)` for `q != 0`
    /// and `N^0 = O_2(kappa)`.
    pub fn validate(&self) -> Result<()> {
        for (q, nq) in &self.components {
            if q.n() != self.n {
                return Err(Error::DimensionMismatch(format!("component q = {q:?} in n = {}", self.n)));
            }
            for (l, _) in nq.iter() {
                let deg = q.l1() + 2 * l.degree();
                if deg < 3 {
                    return Err(Error::Support(format!("component q = {q:?}, {l:?} has z-degree {deg} < 3")));
                }
            }
        }
        Ok(())
    }

    /// `sum_q z^{k_q} N^q`.
    pub fn reconstruct(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::diamond(self.n, self.max_degree);
        for (q, nq) in &self.components {
            let kq = minimal_index(q.as_slice());
            for (l, &c) in nq.iter() {
                out.add_term(kq.add(&l.to_multi_index()), c);
            }
        }
        out
    }

    /// `G^q -> e^{-omega_q delta} G^q`, the passage from rescaled to
    /// original variables.
    pub fn rescale(&self, freq: &FrequencyVector, delta: f64) -> Self {
        let mut out = Self::new(self.n, self.max_degree);
        for (q, nq) in &self.components {
            let f = (-freq.omega_of(q) * delta).exp();
            out.set(*q, nq.scale(C64::new(f, 0.0)));
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.reconstruct().max_abs_diff(&other.reconstruct())
    }

    pub fn to_json(&self) -> GradedJson {
        GradedJson {
            n: self.n,
            m: self.max_degree,
            components: self
                .components
                .iter()
                .map(|(q, nq)| ComponentJson { q: q.as_slice().to_vec(), coeffs: kappa_map(nq) })
                .collect(),
        }
    }

    pub fn from_json(j: &GradedJson) -> Result<Self> {
        let mut out = Self::new(j.n, j.m);
        for c in &j.components {
            if c.q.len() != j.n {
                return Err(Error::Parse(format!("q = {:?} does not have {} entries", c.q, j.n)));
            }
            let q = Lattice::from_slice(&c.q);
            let nq = normal_from_kappa_map(j.n, component_degree(&q, j.m), &c.coeffs)?;
            out.set(q, nq);
        }
        out.validate()?;
        Ok(out)
    }
}

/// Group the terms of a diamond series by `k' = q` and factor each as
/// `k_q + (l, l)`.
pub fn grade(h: &TruncatedSeries) -> Result<GradedHamiltonian> {
    if !h.is_diamond() {
        return Err(Error::Support("grading needs a diamond series".into()));
    }
    let mut out = GradedHamiltonian::new(h.n(), h.max_degree());
    for (k, &c) in h.iter() {
        out.add_term(k.kprime(), k.diagonal_floor(), c);
    }
    Ok(out)
}
