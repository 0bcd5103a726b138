//! Classical RK4 integration of the truncated coefficient system in the
//! original variables, `dH/ddelta = -{xi H, H_2} - {xi H, H}`.
//!
//! The nonlinear part `-{xi H, H}` equals `v1 + v2`; it is assembled here
//! directly from `poisson_bracket` on basis monomials so that this path
//! shares no code with the exact solver.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{poisson_bracket, FrequencyVector, MultiIndex, TruncatedSeries, C64};
use crate::error::{Error, Result};

use super::exact::check_seed;

/// The vector field `x' = L x + B(x, x)` on the support closure of a seed.
#[derive(Clone, Debug)]
pub struct QuadraticField {
    n: usize,
    max_degree: u32,
    basis: Vec<MultiIndex>,
    linear: Vec<C64>,
    triples: Vec<(u32, u32, u32, C64)>,
}

fn unit(n: usize, m: u32, k: MultiIndex) -> TruncatedSeries {
    TruncatedSeries::monomial(n, m, k, C64::new(1.0, 0.0))
}

impl QuadraticField {
    pub fn build(seed: &TruncatedSeries, freq: &FrequencyVector) -> Result<Self> {
        check_seed(seed, freq)?;
        let (n, m) = (seed.n(), seed.max_degree());
        let h2 = TruncatedSeries::quadratic_part(freq, m);
        let mut index: BTreeMap<MultiIndex, usize> = BTreeMap::new();
        let mut basis: Vec<MultiIndex> = Vec::new();
        let mut xi_basis: Vec<TruncatedSeries> = Vec::new();
        let mut linear = Vec::new();
        let mut triples = Vec::new();
        let mut queue: Vec<MultiIndex> = seed.keys().copied().collect();
        let mut seen: BTreeSet<MultiIndex> = queue.iter().copied().collect();

        // Worklist: each new index is bracketed against every index
        // already present, in both orders.
        while let Some(k) = queue.pop() {
            let id = basis.len();
            index.insert(k, id);
            basis.push(k);
            let ek = unit(n, m, k);
            let xk = ek.apply_xi(freq);
            let lin = poisson_bracket(&xk, &h2)?;
            linear.push(-lin.get(&k));
            if lin.len() > 1 {
                return Err(Error::Structural("bracket with H_2 is not diagonal".into()));
            }
            xi_basis.push(xk);
            for other in 0..=id {
                let b = basis[other];
                if k.degree() + b.degree() > m + 2 {
                    continue;
                }
                let eb = unit(n, m, b);
                let pairs: [(usize, usize, TruncatedSeries); 2] = [
                    (id, other, poisson_bracket(&xi_basis[id], &eb)?),
                    (other, id, poisson_bracket(&xi_basis[other], &ek)?),
                ];
                for (ia, ib, br) in pairs.iter().take(if other == id { 1 } else { 2 }) {
                    for (out, c) in br.iter() {
                        if out.degree() < 3 {
                            return Err(Error::Structural(format!("bracket produced degree {} term", out.degree())));
                        }
                        if seen.insert(*out) {
                            queue.push(*out);
                        }
                        triples.push((*ia as u32, *ib as u32, *out, -*c));
                    }
                }
            }
        }
        let triples = triples.into_iter().map(|(a, b, out, c)| (a, b, index[&out] as u32, c)).collect();
        Ok(Self { n, max_degree: m, basis, linear, triples })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// Largest linear decay rate `max omega_{k'}` over the basis.
    pub fn max_rate(&self) -> f64 {
        self.linear.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn state_of(&self, h: &TruncatedSeries) -> Vec<C64> {
        self.basis.iter().map(|k| h.get(k)).collect()
    }

    pub fn series_of(&self, x: &[C64]) -> TruncatedSeries {
        let mut out = TruncatedSeries::diamond(self.n, self.max_degree);
        for (k, &v) in self.basis.iter().zip(x) {
            out.add_term(*k, v);
        }
        out
    }

    pub fn eval(&self, x: &[C64], out: &mut [C64]) {
        for ((o, &l), &xi) in out.iter_mut().zip(&self.linear).zip(x) {
            *o = l * xi;
        }
        for &(a, b, k, c) in &self.triples {
            out[k as usize] += c * x[a as usize] * x[b as usize];
        }
    }

    /// One classical RK4 step of size `h`.
    pub fn step(&self, x: &mut [C64], h: f64, work: &mut [Vec<C64>; 5]) {
        let [k1, k2, k3, k4, tmp] = work;
        self.eval(x, k1);
        for i in 0..x.len() {
            tmp[i] = x[i] + k1[i] * (0.5 * h);
        }
        self.eval(tmp, k2);
        for i in 0..x.len() {
            tmp[i] = x[i] + k2[i] * (0.5 * h);
        }
        self.eval(tmp, k3);
        for i in 0..x.len() {
            tmp[i] = x[i] + k3[i] * h;
        }
        self.eval(tmp, k4);
        for i in 0..x.len() {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    }

    pub fn work_buffers(&self) -> [Vec<C64>; 5] {
        std::array::from_fn(|_| vec![C64::default(); self.basis.len()])
    }
}

/// `ceil(200 delta (1 + max_rate))`, at least one step.
pub fn default_steps(delta: f64, max_rate: f64) -> usize {
    ((200.0 * delta * (1.0 + max_rate)).ceil() as usize).max(1)
}

/// `H_⋄(delta)` by RK4 with `steps` equal steps (`None` uses [`default_steps`]).
pub fn rk4_oracle(seed: &TruncatedSeries, freq: &FrequencyVector, delta: f64, steps: Option<usize>) -> Result<TruncatedSeries> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
    }
    if steps == Some(0) {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let field = QuadraticField::build(seed, freq)?;
    if delta == 0.0 {
        return Ok(seed.clone());
    }
    let steps = steps.unwrap_or_else(|| default_steps(delta, field.max_rate()));
    let mut x = field.state_of(seed);
    let mut work = field.work_buffers();
    let h = delta / steps as f64;
    for _ in 0..steps {
        field.step(&mut x, h, &mut work);
    }
    Ok(field.series_of(&x))
}

/// RK4 through increasing checkpoints with a common step `h = 1 / steps_per_unit`
/// (the last step into each checkpoint is shortened to land exactly).
pub fn rk4_oracle_checkpoints(
    seed: &TruncatedSeries,
    freq: &FrequencyVector,
    deltas: &[f64],
    steps_per_unit: Option<usize>,
) -> Result<Vec<TruncatedSeries>> {
    if deltas.iter().any(|d| !(*d >= 0.0)) || deltas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("checkpoints must be nonnegative and sorted".into()));
    }
    let field = QuadraticField::build(seed, freq)?;
    let per_unit = steps_per_unit.unwrap_or_else(|| default_steps(1.0, field.max_rate()));
    let h = 1.0 / per_unit as f64;
    let mut x = field.state_of(seed);
    let mut work = field.work_buffers();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(deltas.len());
    for &target in deltas {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / h).ceil().max(1.0) as usize;
            let hh = span / steps as f64;
            for _ in 0..steps {
                field.step(&mut x, hh, &mut work);
            }
        }
        t = target;
        out.push(field.series_of(&x));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_against_closed_form() {
        let one = C64::new(1.0, 0.0);
        let seed = TruncatedSeries::from_terms(
            1,
            4,
            3,
            [(MultiIndex::new(&[3], &[0]), one), (MultiIndex::new(&[0], &[3]), one)],
        )
        .unwrap();
        let f = FrequencyVector::for_truncation(vec![1.0], 1e-9, 4).unwrap();
        let h = rk4_oracle(&seed, &f, 1.0, Some(1000)).unwrap();
        let want = -3.0 * (1.0 - (-6.0f64).exp());
        assert!((h.get(&MultiIndex::new(&[2], &[2])).re - want).abs() < 1e-8);
        assert_eq!(rk4_oracle(&seed, &f, 0.0, None).unwrap(), seed);
    }
}
