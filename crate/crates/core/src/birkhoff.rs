//! Classical Birkhoff normalization by successive Lie transforms.

use crate::algebra::{poisson_bracket, FrequencyVector, NormalSeries, TruncatedSeries, C64};
use crate::error::{Error, Result};
use crate::flow::exact::check_seed;

#[derive(Clone, Debug)]
pub struct BirkhoffResult {
    pub normal: NormalSeries,
    /// `(d, chi_d)` for `d = 3..=M`.
    pub generators: Vec<(u32, TruncatedSeries)>,
    /// Largest non-normal coefficient left at each degree right after its
    /// homological step.
    pub residuals: Vec<(u32, f64)>,
}

/// `exp(L_chi) G` with `L_chi F = {F, chi}`, using `terms` nested brackets.
pub fn lie_transform(g: &TruncatedSeries, chi: &TruncatedSeries, terms: u32) -> Result<TruncatedSeries> {
    let mut out = g.clone();
    let mut current = g.clone();
    for m in 1..=terms {
        current = poisson_bracket(&current, chi)?.scale(C64::new(1.0 / m as f64, 0.0));
        if current.is_empty() {
            break;
        }
        out = out.add(&current)?;
    }
    Ok(out)
}

/// Normalize `H_2 + seed` degree by degree through `M`.
pub fn birkhoff_normalize(seed: &TruncatedSeries, freq: &FrequencyVector) -> Result<BirkhoffResult> {
    check_seed(seed, freq)?;
    let (n, m) = (seed.n(), seed.max_degree());
    let omega = freq.omega();
    let mut g = TruncatedSeries::quadratic_part(freq, m).add(&seed.clone().into_general())?;
    let mut generators = Vec::new();
    let mut residuals = Vec::new();
    for d in 3..=m {
        let mut chi = TruncatedSeries::new(n, m);
        for (k, c) in g.homogeneous(d).iter() {
            let kp = k.kprime();
            if kp.is_zero() {
                continue;
            }
            let w = kp.dot(omega);
            if w.abs() < freq.resonance_tolerance() {
                return Err(Error::SmallDivisor { kprime: kp.as_slice().to_vec(), value: w.abs() });
            }
            chi.add_term(*k, c / C64::new(0.0, w));
        }
        if !chi.is_empty() {
            let terms = (m - 2).div_ceil(d - 2);
            g = lie_transform(&g, &chi, terms)?;
        }
        let left = g
            .homogeneous(d)
            .iter()
            .filter(|(k, _)| !k.is_normal())
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        residuals.push((d, left));
        generators.push((d, chi));
    }
    let mut normal = NormalSeries::new(n, m);
    for (k, c) in g.iter() {
        if let Some(l) = k.action_part() {
            if k.degree() >= 4 {
                normal.add_term(l, *c);
            }
        }
    }
    Ok(BirkhoffResult { normal, generators, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ActionIndex, MultiIndex};

    #[test]
    fn fixture_normal_form() {
        let one = C64::new(1.0, 0.0);
        let seed = TruncatedSeries::from_terms(
            1,
            4,
            3,
            [(MultiIndex::new(&[3], &[0]), one), (MultiIndex::new(&[0], &[3]), one)],
        )
        .unwrap();
        let f = FrequencyVector::for_truncation(vec![1.0], 1e-9, 4).unwrap();
        let r = birkhoff_normalize(&seed, &f).unwrap();
        assert!((r.normal.get(&ActionIndex::new(&[2])) + 3.0).norm() < 1e-12);
        assert!(r.residuals.iter().all(|(_, x)| *x < 1e-12));
    }

    #[test]
    fn single_cubic_term() {
        let seed =
            TruncatedSeries::from_terms(2, 3, 3, [(MultiIndex::new(&[2, 0], &[0, 1]), C64::new(1.0, 0.0))]).unwrap();
        let f = FrequencyVector::for_truncation(vec![1.0, 2f64.sqrt()], 1e-6, 3).unwrap();
        let r = birkhoff_normalize(&seed, &f).unwrap();
        assert!(r.normal.is_empty());
        assert_eq!(r.generators[0].1.len(), 1);
    }

    #[test]
    fn needs_certificate_through_m() {
        let seed =
            TruncatedSeries::from_terms(2, 3, 3, [(MultiIndex::new(&[2, 0], &[0, 1]), C64::new(1.0, 0.0))]).unwrap();
        let short = FrequencyVector::new(vec![1.0, 2.05], 0.01, 2).unwrap();
        assert!(matches!(birkhoff_normalize(&seed, &short), Err(Error::OrderOverflow { .. })));
    }
}
