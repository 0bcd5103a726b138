#![allow(dead_code)]

use normflow::algebra::{FrequencyVector, MultiIndex, TruncatedSeries, C64};
use rand::Rng;

/// All multi-indices with `lo <= |k| <= hi`.
pub fn indices(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut e = vec![0u32; 2 * n];
    fn rec(e: &mut Vec<u32>, pos: usize, left: u32, n: usize, lo: u32, hi: u32, out: &mut Vec<MultiIndex>) {
        if pos == e.len() {
            let d: u32 = e.iter().sum();
            if d >= lo && d <= hi {
                out.push(MultiIndex::new(&e[..n], &e[n..]));
            }
            return;
        }
        for x in 0..=left {
            e[pos] = x;
            rec(e, pos + 1, left - x, n, lo, hi, out);
        }
        e[pos] = 0;
    }
    rec(&mut e, 0, hi, n, lo, hi, &mut out);
    out.sort();
    out
}

/// Frequencies `(1)` or `(1, gamma)` with a certificate through `2M`.
pub fn random_freq<R: Rng>(rng: &mut R, n: usize, m: u32) -> FrequencyVector {
    loop {
        let mut omega = vec![1.0];
        for _ in 1..n {
            omega.push(rng.gen_range(0.6..1.9));
        }
        if let Ok(f) = FrequencyVector::for_truncation(omega, 1e-3, m) {
            return f;
        }
    }
}

fn random_c<R: Rng>(rng: &mut R, scale: f64) -> C64 {
    C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// A sparse real seed: `pairs` conjugate pairs of terms with degree in
/// `3..=max_seed_degree`.
pub fn random_real_seed<R: Rng>(rng: &mut R, n: usize, m: u32, pairs: usize, max_seed_degree: u32) -> TruncatedSeries {
    let pool = indices(n, 3, max_seed_degree.min(m));
    let mut s = TruncatedSeries::diamond(n, m);
    for _ in 0..pairs {
        let k = pool[rng.gen_range(0..pool.len())];
        let c = random_c(rng, 1.0);
        if k.is_normal() {
            s.add_term(k, C64::new(c.re, 0.0));
        } else {
            s.add_term(k, c);
            s.add_term(k.conjugate(), c.conj());
        }
    }
    s
}

/// Symmetrise a real seed under `I^+` (`plus`) or `I^-`.
pub fn symmetrise(h: &TruncatedSeries, plus: bool) -> TruncatedSeries {
    h.add(&h.involution(plus)).unwrap().scale(C64::new(0.5, 0.0))
}
