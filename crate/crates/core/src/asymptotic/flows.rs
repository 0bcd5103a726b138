//! The asymptotic flow `d N^q / d delta = -sigma_q N^q <q, d> N^0` and the
//! one-sided example built on it.

use crate::algebra::{minimal_index, ActionIndex, FrequencyVector, Lattice, NormalSeries, C64};
use crate::error::{Error, Result};

use super::graded::{component_degree, GradedHamiltonian};

/// `exp(g) n`, truncated at `n`'s degree. `g` must have no constant term,
/// which makes the series finite.
pub fn exp_times(g: &NormalSeries, n: &NormalSeries) -> Result<NormalSeries> {
    if g.get(&ActionIndex::zero(g.n())) != C64::default() {
        return Err(Error::Support("exponent has a constant term; the truncated exponential is not finite".into()));
    }
    let d = n.max_degree();
    let mut acc = n.clone();
    let mut term = n.clone();
    for m in 1.. {
        term = term.mul_truncated(g, d).scale(C64::new(1.0 / m as f64, 0.0));
        if term.is_empty() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// `g_q = -sigma_q delta <q, d> N^0`, restricted to the budget of `N^q`.
fn exponent_for(q: &Lattice, n0: &NormalSeries, freq: &FrequencyVector, delta: f64, m: u32) -> Result<NormalSeries> {
    let (sigma, _) = freq.sigma_omega(q)?;
    Ok(n0.directional(q).with_max_degree(component_degree(q, m)).scale(C64::new(-(sigma as f64) * delta, 0.0)))
}

/// Closed-form solution `N^q = exp(-sigma_q delta <q, d> N^0) Nhat^q`.
pub fn asymptotic_flow_explicit(seed: &GradedHamiltonian, freq: &FrequencyVector, delta: f64) -> Result<GradedHamiltonian> {
    check(seed, freq, delta)?;
    let m = seed.max_degree();
    let n0 = seed.get(&Lattice::zero(seed.n()));
    let mut out = GradedHamiltonian::new(seed.n(), m);
    for (q, nq) in seed.components() {
        if q.is_zero() {
            out.set(*q, nq.clone());
            continue;
        }
        let g = exponent_for(q, &n0, freq, delta, m)?;
        out.set(*q, exp_times(&g, nq)?);
    }
    Ok(out)
}

fn check(seed: &GradedHamiltonian, freq: &FrequencyVector, delta: f64) -> Result<()> {
    if seed.n() != freq.n() {
        return Err(Error::DimensionMismatch(format!("seed n = {}, omega has {}", seed.n(), freq.n())));
    }
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
    }
    seed.validate()
}

/// RK4 integration of the same system, all components including `N^0`
/// (whose right-hand side is zero).
pub fn asymptotic_flow_ode(seed: &GradedHamiltonian, freq: &FrequencyVector, delta: f64, steps: usize) -> Result<GradedHamiltonian> {
    check(seed, freq, delta)?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let zero = Lattice::zero(seed.n());
    let qs: Vec<Lattice> = seed.components().keys().copied().collect();
    let sig: Vec<f64> = qs.iter().map(|q| freq.sigma_omega(q).map(|s| s.0 as f64)).collect::<Result<_>>()?;
    let rhs = |_t: f64, state: &[NormalSeries]| -> Vec<NormalSeries> {
        let n0 = qs.iter().position(|q| *q == zero).map(|i| state[i].clone());
        qs.iter()
            .zip(state)
            .zip(&sig)
            .map(|((q, nq), s)| match &n0 {
                Some(n0) if !q.is_zero() => {
                    nq.mul_truncated(&n0.directional(q), nq.max_degree()).scale(C64::new(-s, 0.0))
                }
                _ => NormalSeries::new(nq.n(), nq.max_degree()),
            })
            .collect()
    };
    let mut state: Vec<NormalSeries> = qs.iter().map(|q| seed.get(q)).collect();
    let h = delta / steps as f64;
    for i in 0..steps {
        state = rk4_step(&state, i as f64 * h, h, &rhs);
    }
    let mut out = GradedHamiltonian::new(seed.n(), seed.max_degree());
    for (q, nq) in qs.into_iter().zip(state) {
        out.set(q, nq);
    }
    Ok(out)
}

pub(crate) fn rk4_step(
    state: &[NormalSeries],
    t: f64,
    h: f64,
    rhs: &impl Fn(f64, &[NormalSeries]) -> Vec<NormalSeries>,
) -> Vec<NormalSeries> {
    let axpy = |x: &[NormalSeries], k: &[NormalSeries], a: f64| -> Vec<NormalSeries> {
        x.iter().zip(k).map(|(x, k)| x.add(&k.scale(C64::new(a, 0.0)))).collect()
    };
    let k1 = rhs(t, state);
    let k2 = rhs(t + 0.5 * h, &axpy(state, &k1, 0.5 * h));
    let k3 = rhs(t + 0.5 * h, &axpy(state, &k2, 0.5 * h));
    let k4 = rhs(t + h, &axpy(state, &k3, h));
    state
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let inc = k1[i].add(&k2[i].scale(C64::new(2.0, 0.0))).add(&k3[i].scale(C64::new(2.0, 0.0))).add(&k4[i]);
            x.add(&inc.scale(C64::new(h / 6.0, 0.0)))
        })
        .collect()
}

/// `H^q = e^{-(omega_q + h_q) delta} Hhat^q`, `h_q = sigma_q <q, d> Hhat^0`,
/// for seeds supported in `<omega, q> >= 0`. Returned in the original
/// variables.
pub fn one_sided_flow(seed: &GradedHamiltonian, freq: &FrequencyVector, delta: f64) -> Result<GradedHamiltonian> {
    check(seed, freq, delta)?;
    for q in seed.components().keys() {
        if freq.sigma_omega(q)?.0 < 0 {
            return Err(Error::Support(format!("component q = {q:?} has <omega, q> < 0")));
        }
    }
    Ok(asymptotic_flow_explicit(seed, freq, delta)?.rescale(freq, delta))
}

/// `polydisk_norm_upper(H_⋄(delta), rho)` along the one-sided flow.
pub fn divergence_probe(seed: &GradedHamiltonian, freq: &FrequencyVector, rho: f64, deltas: &[f64]) -> Result<Vec<f64>> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be > 0, got {rho}")));
    }
    deltas.iter().map(|&d| Ok(one_sided_flow(seed, freq, d)?.reconstruct().polydisk_norm_upper(rho))).collect()
}

/// The `q` with `<omega, q> > 0`, mixed signs and `|q| <= max_order` that
/// minimises `omega_q / |q|` (n = 2).
pub fn smallest_divisor_direction(freq: &FrequencyVector, max_order: u32) -> Result<Lattice> {
    if freq.n() != 2 {
        return Err(Error::InvalidParameter("the surrogate construction is two-dimensional".into()));
    }
    let b = max_order as i32;
    let mut best: Option<(f64, Lattice)> = None;
    for a in -b..=b {
        for c in -b..=b {
            let q = Lattice::from_slice(&[a, c]);
            if a * c >= 0 || q.l1() > max_order {
                continue;
            }
            let (s, w) = freq.sigma_omega(&q)?;
            if s <= 0 {
                continue;
            }
            let r = w / q.l1() as f64;
            if best.map_or(true, |(br, _)| r < br) {
                best = Some((r, q));
            }
        }
    }
    best.map(|(_, q)| q).ok_or_else(|| Error::InvalidParameter("no admissible direction".into()))
}

/// Seed `z^{k_q} + (kappa_1^2 + kappa_2^2) / 2` with `q` from
/// [`smallest_divisor_direction`] at order `M - 4`, i.e. `A = identity`.
pub fn small_divisor_seed(freq: &FrequencyVector, m: u32) -> Result<(GradedHamiltonian, Lattice)> {
    if m < 8 {
        return Err(Error::InvalidParameter("need M >= 8 for the surrogate seed".into()));
    }
    let q = smallest_divisor_direction(freq, m - 4)?;
    let mut g = GradedHamiltonian::new(2, m);
    g.add_term(q, ActionIndex::zero(2), C64::new(1.0, 0.0));
    g.add_term(Lattice::zero(2), ActionIndex::new(&[2, 0]), C64::new(0.5, 0.0));
    g.add_term(Lattice::zero(2), ActionIndex::new(&[0, 2]), C64::new(0.5, 0.0));
    debug_assert_eq!(minimal_index(q.as_slice()).degree(), q.l1());
    Ok((g, q))
}
