//! The three-component system left when the seed is supported on
//! `{-q, 0, q}`:
//!
//! `d N^{±q} = -N^{±q} <q, d> N^0`,
//! `d N^0 = -2 <q, d> (kappa^{[q]} N^{-q} N^q) e^{-2 omega_q delta}`.

use crate::algebra::{ActionIndex, FrequencyVector, Lattice, NormalSeries, C64};
use crate::error::{Error, Result};

use super::flows::rk4_step;
use super::graded::{component_degree, GradedHamiltonian};

/// `(N^q, N^{-q}, N^0)`.
pub type ThreeState = (NormalSeries, NormalSeries, NormalSeries);

/// `kappa^{[q]}` with `[q]_j = |q_j|`.
pub fn kappa_q(q: &Lattice, max_degree: u32) -> NormalSeries {
    let l: Vec<u32> = q.as_slice().iter().map(|x| x.unsigned_abs()).collect();
    NormalSeries::from_terms(q.n(), max_degree, [(ActionIndex::new(&l), C64::new(1.0, 0.0))])
}

fn rhs(q: &Lattice, omega_q: f64, t: f64, s: &[NormalSeries]) -> Vec<NormalSeries> {
    let (nq, nmq, n0) = (&s[0], &s[1], &s[2]);
    let d0 = n0.directional(q);
    let m = n0.max_degree();
    // `<q, d>` lowers the z-degree by two, so the product is needed at `M + 2`.
    let prod = kappa_q(q, m + 2).mul_truncated(&nmq.mul_truncated(nq, m + 2), m + 2);
    vec![
        nq.mul_truncated(&d0, nq.max_degree()).scale(C64::new(-1.0, 0.0)),
        nmq.mul_truncated(&d0, nmq.max_degree()).scale(C64::new(-1.0, 0.0)),
        prod.directional(q).with_max_degree(m).scale(C64::new(-2.0 * (-2.0 * omega_q * t).exp(), 0.0)),
    ]
}

/// RK4 integration of the system from 0 to `delta` in `steps` steps.
///
/// The truncation is taken from `n0` (z-degree `M`, kappa-degree `M/2`);
/// `N^{±q}` are cut at `M - |q|`.
pub fn three_system_integrate(
    nq: &NormalSeries,
    nmq: &NormalSeries,
    n0: &NormalSeries,
    q: &Lattice,
    freq: &FrequencyVector,
    delta: f64,
    steps: usize,
) -> Result<ThreeState> {
    let n = freq.n();
    if [nq.n(), nmq.n(), n0.n(), q.n()].iter().any(|&x| x != n) {
        return Err(Error::DimensionMismatch(format!("components must have n = {n}")));
    }
    let (sigma, omega_q) = freq.sigma_omega(q)?;
    if sigma <= 0 {
        return Err(Error::InvalidParameter(format!("need <omega, q> > 0, q = {q:?}")));
    }
    if !(delta >= 0.0) || steps == 0 {
        return Err(Error::InvalidParameter("need delta >= 0 and steps >= 1".into()));
    }
    let m = n0.max_degree();
    let dq = component_degree(q, m);
    if m < 2 * q.l1() {
        return Err(Error::InvalidParameter(format!("truncation {m} too small for |q| = {}", q.l1())));
    }
    let mut state = vec![nq.with_max_degree(dq), nmq.with_max_degree(dq), n0.clone()];
    let h = delta / steps as f64;
    let f = |t: f64, s: &[NormalSeries]| rhs(q, omega_q, t, s);
    for i in 0..steps {
        state = rk4_step(&state, i as f64 * h, h, &f);
    }
    let n0 = state.pop().unwrap();
    let nmq = state.pop().unwrap();
    let nq = state.pop().unwrap();
    Ok((nq, nmq, n0))
}

/// Components of a graded Hamiltonian supported on `{-q, 0, q}`.
pub fn three_components(g: &GradedHamiltonian, q: &Lattice) -> Result<ThreeState> {
    let zero = Lattice::zero(g.n());
    let mq = q.neg();
    if let Some(p) = g.components().keys().find(|p| **p != *q && **p != mq && **p != zero) {
        return Err(Error::Support(format!("component {p:?} outside {{-q, 0, q}}")));
    }
    Ok((g.get(q), g.get(&mq), g.get(&zero)))
}

/// Inverse of [`three_components`].
pub fn three_graded(state: &ThreeState, q: &Lattice, max_degree: u32) -> GradedHamiltonian {
    let mut g = GradedHamiltonian::new(q.n(), max_degree);
    g.set(*q, state.0.clone());
    g.set(q.neg(), state.1.clone());
    g.set(Lattice::zero(q.n()), state.2.clone());
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::grade;
    use crate::flow::solve_flow;

    fn setup() -> (FrequencyVector, Lattice, ThreeState) {
        let f = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, 8).unwrap();
        let q = Lattice::from_slice(&[1, 0]);
        let m = 8;
        let c = |x: f64| C64::new(x, 0.0);
        let nq = NormalSeries::from_terms(2, 7, [(ActionIndex::new(&[1, 0]), c(0.3)), (ActionIndex::new(&[0, 1]), c(0.2))]);
        let nmq = NormalSeries::from_terms(2, 7, [(ActionIndex::new(&[1, 0]), c(0.3)), (ActionIndex::new(&[0, 1]), c(0.2))]);
        let n0 = NormalSeries::from_terms(2, m, [(ActionIndex::new(&[2, 0]), c(0.5)), (ActionIndex::new(&[1, 1]), c(-0.25))]);
        (f, q, (nq, nmq, n0))
    }

    #[test]
    fn matches_exact_flow() {
        let (f, q, s) = setup();
        let seed = three_graded(&s, &q, 8).reconstruct();
        let sol = solve_flow(&seed, &f).unwrap();
        for delta in [0.5, 2.0] {
            let out = three_system_integrate(&s.0, &s.1, &s.2, &q, &f, delta, 400).unwrap();
            let exact = grade(&sol.calh_at(delta)).unwrap();
            let r = three_graded(&out, &q, 8).max_abs_diff(&exact);
            assert!(r < 1e-9, "delta {delta}: {r}");
        }
    }

    #[test]
    fn trivial_and_halving() {
        let (f, q, s) = setup();
        let z = NormalSeries::new(2, 7);
        let (_, _, n0) = three_system_integrate(&z, &z, &s.2, &q, &f, 3.0, 10).unwrap();
        assert_eq!(n0, s.2);

        let zero0 = NormalSeries::new(2, 8);
        let a = three_system_integrate(&s.0, &s.1, &zero0, &q, &f, 2.0, 200).unwrap();
        let b = three_system_integrate(&s.0, &s.1, &zero0, &q, &f, 2.0, 400).unwrap();
        let d = three_graded(&a, &q, 8).max_abs_diff(&three_graded(&b, &q, 8));
        assert!(d < 1e-8, "{d}");
        assert!(a.2.max_abs_coeff() > 0.0);
    }

    #[test]
    fn rejects_negative_direction() {
        let (f, _, s) = setup();
        let q = Lattice::from_slice(&[-1, 0]);
        assert!(three_system_integrate(&s.0, &s.1, &s.2, &q, &f, 1.0, 10).is_err());
    }
}
