//! Multi-indices `(k, kbar)` of monomials `z^k zbar^kbar`, integer lattice
//! vectors `q`, action monomials `kappa^l`, and the q-graded helpers
//! `k_q` and `q ◁ p`.

use std::fmt;

/// Largest supported number of degrees of freedom.
pub const MAX_DOF: usize = 8;

/// Exponent pair `(k, kbar)` of a monomial `z^k zbar^kbar`.
///
/// Ordering is graded lexicographic: total degree first, then `k`, then
/// `kbar`. Every map keyed by `MultiIndex` therefore iterates in a canonical
/// order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    degree: u16,
    n: u8,
    e: [u8; 2 * MAX_DOF],
}

impl MultiIndex {
    pub fn new(k: &[u32], kbar: &[u32]) -> Self {
        assert_eq!(k.len(), kbar.len(), "k and kbar must have the same length");
        assert!(k.len() <= MAX_DOF, "at most {MAX_DOF} degrees of freedom");
        let n = k.len();
        let mut e = [0u8; 2 * MAX_DOF];
        let mut degree = 0u16;
        for j in 0..n {
            assert!(k[j] < 256 && kbar[j] < 256, "exponent too large");
            e[j] = k[j] as u8;
            e[n + j] = kbar[j] as u8;
            degree += (k[j] + kbar[j]) as u16;
        }
        Self { degree, n: n as u8, e }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(&vec![0; n], &vec![0; n])
    }

    /// `kappa^l = (z zbar)^l` as a multi-index `(l, l)`.
    pub fn diagonal(l: &[u32]) -> Self {
        Self::new(l, l)
    }

    /// Unit vector `e_j` placed in the `z` slot.
    pub fn unit_z(n: usize, j: usize) -> Self {
        let mut k = vec![0; n];
        k[j] = 1;
        Self::new(&k, &vec![0; n])
    }

    /// Unit vector `e_j` placed in the `zbar` slot.
    pub fn unit_zbar(n: usize, j: usize) -> Self {
        let mut kbar = vec![0; n];
        kbar[j] = 1;
        Self::new(&vec![0; n], &kbar)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Total degree `|k| + |kbar|`.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    #[inline]
    pub fn k(&self, j: usize) -> u32 {
        self.e[j] as u32
    }

    #[inline]
    pub fn kbar(&self, j: usize) -> u32 {
        self.e[self.n as usize + j] as u32
    }

    pub fn k_vec(&self) -> Vec<u32> {
        (0..self.n()).map(|j| self.k(j)).collect()
    }

    pub fn kbar_vec(&self) -> Vec<u32> {
        (0..self.n()).map(|j| self.kbar(j)).collect()
    }

    /// `k' = kbar - k`.
    pub fn kprime(&self) -> Lattice {
        let mut q = Lattice::zero(self.n());
        for j in 0..self.n() {
            q.c[j] = self.kbar(j) as i32 - self.k(j) as i32;
        }
        q
    }

    /// True when `k = kbar`, i.e. the monomial lies in the normal-form space.
    pub fn is_normal(&self) -> bool {
        let n = self.n();
        self.e[..n] == self.e[n..2 * n]
    }

    /// `k* = (kbar, k)`.
    pub fn conjugate(&self) -> Self {
        let n = self.n();
        let mut e = [0u8; 2 * MAX_DOF];
        e[..n].copy_from_slice(&self.e[n..2 * n]);
        e[n..2 * n].copy_from_slice(&self.e[..n]);
        Self { degree: self.degree, n: self.n, e }
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..2 * self.n() {
            out.e[i] = self.e[i] + other.e[i];
        }
        out.degree = self.degree + other.degree;
        out
    }

    /// Componentwise difference, `None` if any exponent would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..2 * self.n() {
            out.e[i] = self.e[i].checked_sub(other.e[i])?;
        }
        out.degree = self.degree - other.degree;
        Some(out)
    }

    /// The `l` with `self = (l, l)`, if this index is diagonal.
    pub fn action_part(&self) -> Option<ActionIndex> {
        if self.is_normal() {
            Some(ActionIndex::new(&self.k_vec()))
        } else {
            None
        }
    }

    /// Componentwise `min(k_j, kbar_j)`: the `l` in `self = k_q + (l, l)`.
    pub fn diagonal_floor(&self) -> ActionIndex {
        let l: Vec<u32> = (0..self.n()).map(|j| self.k(j).min(self.kbar(j))).collect();
        ActionIndex::new(&l)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?};{:?})", self.k_vec(), self.kbar_vec())
    }
}

/// An integer vector in `Z^n` (a resonance vector `q`, a `k'`, or an
/// exponent accumulator).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    n: u8,
    c: [i32; MAX_DOF],
}

impl Lattice {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DOF, "at most {MAX_DOF} degrees of freedom");
        Self { n: n as u8, c: [0; MAX_DOF] }
    }

    pub fn from_slice(q: &[i32]) -> Self {
        let mut out = Self::zero(q.len());
        out.c[..q.len()].copy_from_slice(q);
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, j: usize) -> i32 {
        self.c[j]
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.c[..self.n()]
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&x| x == 0)
    }

    /// `l^1` norm.
    pub fn l1(&self) -> u32 {
        self.as_slice().iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for j in 0..self.n() {
            out.c[j] += other.c[j];
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        for j in 0..self.n() {
            out.c[j] = -out.c[j];
        }
        out
    }

    pub fn scale(&self, s: i32) -> Self {
        let mut out = *self;
        for j in 0..self.n() {
            out.c[j] *= s;
        }
        out
    }

    /// `<omega, q>` in floating point.
    pub fn dot(&self, omega: &[f64]) -> f64 {
        self.as_slice().iter().zip(omega).map(|(&q, &w)| q as f64 * w).sum()
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

/// Exponent `l` of an action monomial `kappa^l`, `kappa_j = z_j zbar_j`.
/// Ordered by kappa-degree first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionIndex {
    degree: u16,
    n: u8,
    l: [u8; MAX_DOF],
}

impl ActionIndex {
    pub fn new(l: &[u32]) -> Self {
        assert!(l.len() <= MAX_DOF, "at most {MAX_DOF} degrees of freedom");
        let mut e = [0u8; MAX_DOF];
        let mut degree = 0u16;
        for (j, &x) in l.iter().enumerate() {
            assert!(x < 256, "exponent too large");
            e[j] = x as u8;
            degree += x as u16;
        }
        Self { degree, n: l.len() as u8, l: e }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(&vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut l = vec![0; n];
        l[j] = 1;
        Self::new(&l)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// kappa-degree `|l|`; the z-degree of `kappa^l` is twice this.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    #[inline]
    pub fn get(&self, j: usize) -> u32 {
        self.l[j] as u32
    }

    pub fn to_vec(&self) -> Vec<u32> {
        (0..self.n()).map(|j| self.get(j)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for j in 0..self.n() {
            out.l[j] += other.l[j];
        }
        out.degree += other.degree;
        out
    }

    /// Lower exponent `j` by one, `None` at zero.
    pub fn lower(&self, j: usize) -> Option<Self> {
        if self.l[j] == 0 {
            return None;
        }
        let mut out = *self;
        out.l[j] -= 1;
        out.degree -= 1;
        Some(out)
    }

    pub fn to_multi_index(&self) -> MultiIndex {
        MultiIndex::diagonal(&self.to_vec())
    }
}

impl fmt::Debug for ActionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "κ^{:?}", self.to_vec())
    }
}

/// The unique minimal multi-index `k_q` with `k_q' = q`:
/// `(k_q)_j = max(-q_j, 0)`, `(kbar_q)_j = max(q_j, 0)`.
pub fn minimal_index(q: &[i32]) -> MultiIndex {
    let k: Vec<u32> = q.iter().map(|&x| (-x).max(0) as u32).collect();
    let kbar: Vec<u32> = q.iter().map(|&x| x.max(0) as u32).collect();
    MultiIndex::new(&k, &kbar)
}

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub fn from_int(x: i32) -> Self {
        HalfInt(2 * x)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value; panics on a proper half-integer.
    pub fn to_int(self) -> i32 {
        assert!(self.is_integer(), "{} is not an integer", self.value());
        self.0 / 2
    }
}

/// Componentwise `q ◁ p`:
/// `0` if `q_j p_j >= 0` or `|p_j| < |q_j|`; `q_j` if `q_j p_j < 0` and
/// `|q_j| < |p_j|`; `q_j / 2` if `q_j = -p_j`.
pub fn triangle(q: &[i32], p: &[i32]) -> Vec<HalfInt> {
    assert_eq!(q.len(), p.len());
    q.iter()
        .zip(p)
        .map(|(&qj, &pj)| {
            if qj * pj >= 0 || pj.abs() < qj.abs() {
                HalfInt(0)
            } else if qj.abs() < pj.abs() {
                HalfInt::from_int(qj)
            } else {
                // qj == -pj, nonzero
                HalfInt(qj)
            }
        })
        .collect()
}

/// `[q ◁ p] + [p ◁ q]`, which is always integral.
pub fn triangle_overlap(q: &[i32], p: &[i32]) -> ActionIndex {
    let a = triangle(q, p);
    let b = triangle(p, q);
    let l: Vec<u32> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| {
            let s = HalfInt(x.abs().0 + y.abs().0);
            s.to_int() as u32
        })
        .collect();
    ActionIndex::new(&l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_basics() {
        let k = MultiIndex::new(&[2, 0], &[1, 3]);
        assert_eq!(k.degree(), 6);
        assert_eq!(k.kprime().as_slice(), &[-1, 3]);
        assert_eq!(k.conjugate().conjugate(), k);
        assert_eq!(k.conjugate().kprime(), k.kprime().neg());
        assert!(!k.is_normal());
        assert!(MultiIndex::diagonal(&[1, 2]).is_normal());
    }

    #[test]
    fn graded_order() {
        let a = MultiIndex::new(&[3], &[0]);
        let b = MultiIndex::new(&[0], &[1]);
        assert!(b < a, "lower degree sorts first");
        let c = MultiIndex::new(&[0], &[3]);
        assert!(c < a);
    }

    #[test]
    fn minimal_index_examples() {
        let m = minimal_index(&[3]);
        assert_eq!((m.k_vec(), m.kbar_vec()), (vec![0], vec![3]));
        let m = minimal_index(&[-1, 2]);
        assert_eq!((m.k_vec(), m.kbar_vec()), (vec![1, 0], vec![0, 2]));
        assert_eq!(minimal_index(&[0, 0]), MultiIndex::zero(2));
        // k_q = k_{-q}^*
        assert_eq!(minimal_index(&[-1, 2]), minimal_index(&[1, -2]).conjugate());
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(triangle(&[2], &[-3]), vec![HalfInt::from_int(2)]);
        assert_eq!(triangle(&[-3], &[2]), vec![HalfInt(0)]);
        let l = triangle_overlap(&[2], &[-3]);
        assert_eq!(l.to_vec(), vec![2]);
        // k_2 + k_{-3} = (3, 2) = k_{-1} + (2, 2)
        let lhs = minimal_index(&[2]).add(&minimal_index(&[-3]));
        let rhs = minimal_index(&[-1]).add(&l.to_multi_index());
        assert_eq!(lhs, rhs);
        assert_eq!((lhs.k_vec(), lhs.kbar_vec()), (vec![3], vec![2]));

        assert_eq!(triangle(&[1, 2], &[4, 0]), vec![HalfInt(0), HalfInt(0)]);
        assert_eq!(triangle(&[2], &[-2]), vec![HalfInt(2)]);
        assert_eq!(triangle(&[3], &[-3]), vec![HalfInt(3)]);
        assert!(!triangle(&[3], &[-3])[0].is_integer());
    }

    #[test]
    fn kq_kp_identity_exhaustive() {
        for q1 in -4..=4 {
            for q2 in -4..=4 {
                for p1 in -4..=4 {
                    for p2 in -4..=4 {
                        let (q, p) = ([q1, q2], [p1, p2]);
                        let sum = [q1 + p1, q2 + p2];
                        let lhs = minimal_index(&q).add(&minimal_index(&p));
                        let rhs = minimal_index(&sum).add(&triangle_overlap(&q, &p).to_multi_index());
                        assert_eq!(lhs, rhs, "q={q:?} p={p:?}");
                    }
                }
            }
        }
    }
}
