use serde::{Deserialize, Serialize};

use super::index::{Lattice, MAX_DOF};
use crate::error::{Error, Result};

/// Frequencies `omega` of `H_2 = sum_j omega_j z_j zbar_j`, certified
/// nonresonant up to a finite order.
///
/// Construction enumerates every nonzero `q` with `|q| <= max_checked_order`
/// and rejects the vector if `|<omega, q>| <= resonance_tolerance` for any
/// of them.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector {
    omega: Vec<f64>,
    resonance_tolerance: f64,
    max_checked_order: u32,
}

/// On-disk frequency record: `{"omega": [...], "tolerance": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyJson {
    pub omega: Vec<f64>,
    pub tolerance: f64,
}

impl FrequencyVector {
    pub fn new(omega: Vec<f64>, resonance_tolerance: f64, max_checked_order: u32) -> Result<Self> {
        if omega.is_empty() || omega.len() > MAX_DOF {
            return Err(Error::InvalidParameter(format!(
                "need between 1 and {MAX_DOF} frequencies, got {}",
                omega.len()
            )));
        }
        if omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("frequencies must be finite".into()));
        }
        if !(resonance_tolerance > 0.0) {
            return Err(Error::InvalidParameter("resonance tolerance must be strictly positive".into()));
        }
        let freq = Self { omega, resonance_tolerance, max_checked_order };
        freq.certify()?;
        Ok(freq)
    }

    /// Certificate sized for truncation degree `m`: every `k'` arising at
    /// that truncation has `|k'| <= m`; the check runs to `2m`.
    pub fn for_truncation(omega: Vec<f64>, resonance_tolerance: f64, m: u32) -> Result<Self> {
        Self::new(omega, resonance_tolerance, 2 * m)
    }

    pub fn from_json(json: &FrequencyJson, m: u32) -> Result<Self> {
        Self::for_truncation(json.omega.clone(), json.tolerance, m)
    }

    pub fn to_json(&self) -> FrequencyJson {
        FrequencyJson { omega: self.omega.clone(), tolerance: self.resonance_tolerance }
    }

    fn certify(&self) -> Result<()> {
        let n = self.n();
        let max = self.max_checked_order as i32;
        let mut q = vec![0i32; n];
        // Enumerate the box [-max, max]^n, keep |q|_1 <= max. Only one of
        // each pair {q, -q} needs checking.
        fn rec(freq: &FrequencyVector, q: &mut Vec<i32>, j: usize, budget: i32) -> Result<()> {
            if j == q.len() {
                let first_nonzero = q.iter().find(|&&x| x != 0);
                if let Some(&x) = first_nonzero {
                    if x > 0 {
                        let v = Lattice::from_slice(q).dot(&freq.omega);
                        if v.abs() <= freq.resonance_tolerance {
                            return Err(Error::Resonance { q: q.clone(), value: v.abs() });
                        }
                    }
                }
                return Ok(());
            }
            for x in -budget..=budget {
                q[j] = x;
                rec(freq, q, j + 1, budget - x.abs())?;
            }
            q[j] = 0;
            Ok(())
        }
        rec(self, &mut q, 0, max)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn resonance_tolerance(&self) -> f64 {
        self.resonance_tolerance
    }

    pub fn max_checked_order(&self) -> u32 {
        self.max_checked_order
    }

    /// `(sigma_q, omega_q) = (sign <omega,q>, |<omega,q>|)`.
    ///
    /// Fails when `|q|` lies beyond the certified order, because the sign of
    /// a possibly resonant inner product is not trustworthy there.
    pub fn sigma_omega(&self, q: &Lattice) -> Result<(i32, f64)> {
        if q.n() != self.n() {
            return Err(Error::DimensionMismatch(format!("q has {} entries, omega has {}", q.n(), self.n())));
        }
        let order = q.l1();
        if order > self.max_checked_order {
            return Err(Error::OrderOverflow { order, max: self.max_checked_order });
        }
        if q.is_zero() {
            return Ok((0, 0.0));
        }
        let v = q.dot(&self.omega);
        Ok((if v > 0.0 { 1 } else { -1 }, v.abs()))
    }

    /// Sign only; panics past the certified order. Intended for internal
    /// code paths whose `q` are bounded by the truncation degree.
    pub fn sigma(&self, q: &Lattice) -> i32 {
        self.sigma_omega(q).expect("q within certified order").0
    }

    /// `omega_q = |<omega, q>|`, no certificate required.
    pub fn omega_of(&self, q: &Lattice) -> f64 {
        q.dot(&self.omega).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn freq2() -> FrequencyVector {
        FrequencyVector::new(vec![1.0, 2f64.sqrt()], 1e-9, 16).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let f = freq2();
        let (s, w) = f.sigma_omega(&Lattice::from_slice(&[1, -1])).unwrap();
        assert_eq!(s, -1);
        assert!((w - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((w - 0.41421).abs() < 1e-5);
        assert_eq!(f.sigma_omega(&Lattice::zero(2)).unwrap(), (0, 0.0));
        let (s, w) = f.sigma_omega(&Lattice::from_slice(&[0, 2])).unwrap();
        assert_eq!(s, 1);
        assert!((w - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn order_overflow() {
        let f = freq2();
        let err = f.sigma_omega(&Lattice::from_slice(&[10, -7])).unwrap_err();
        assert_eq!(err, Error::OrderOverflow { order: 17, max: 16 });
    }

    #[test]
    fn rejects_resonance() {
        let err = FrequencyVector::new(vec![1.0, 2.0], 1e-9, 4).unwrap_err();
        assert!(matches!(err, Error::Resonance { .. }));
        // (1, sqrt 2) is close to resonant at q = (-7, 5) (|<w,q>| ~ 0.071)
        assert!(FrequencyVector::new(vec![1.0, 2f64.sqrt()], 0.08, 12).is_err());
        assert!(FrequencyVector::new(vec![1.0, 2f64.sqrt()], 0.08, 8).is_ok());
        assert!(FrequencyVector::new(vec![1.0], 0.0, 4).is_err());
    }
}
