//! Mod-2 cohomology of `L^{2n+1}(2^e)`: the truncated ring generated by `x`
//! (degree 1) and `y` (degree 2) with `y^{n+1} = 0` and `x^2 = eps * y`,
//! where `eps = 1` exactly for `e = 1`.
//!
//! Classes are stored in the basis `{y^j, x*y^j}` as two bit rows over
//! `GF(2)[y]/(y^{n+1})`. Steenrod squares come from the total square, a ring
//! map fixed by `Sq(x) = x + eps*y` and `Sq(y) = y + y^2`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("cohomology ring needs n >= 1 and e >= 1, got n = {n}, e = {e}")]
    InvalidRing { n: u64, e: u64 },
    #[error("classes live in different rings")]
    RingMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CohomologyRing {
    n: usize,
    epsilon: bool,
}

impl CohomologyRing {
    /// Ring of `L^{2n+1}(2^e)`.
    pub fn new(n: u64, e: u64) -> Result<Self, CohomologyError> {
        if n == 0 || e == 0 {
            return Err(CohomologyError::InvalidRing { n, e });
        }
        let n = usize::try_from(n).map_err(|_| CohomologyError::InvalidRing { n, e })?;
        Ok(CohomologyRing { n, epsilon: e == 1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> bool {
        self.epsilon
    }

    /// Degree of the top class `x*y^n`.
    pub fn top_degree(&self) -> usize {
        2 * self.n + 1
    }

    pub fn zero(&self) -> Mod2Class {
        Mod2Class {
            ring: *self,
            even: Row::zero(self.n),
            odd: Row::zero(self.n),
        }
    }

    pub fn one(&self) -> Mod2Class {
        self.y_pow(0)
    }

    pub fn x(&self) -> Mod2Class {
        self.x_y_pow(0)
    }

    pub fn y(&self) -> Mod2Class {
        self.y_pow(1)
    }

    /// `y^j`, zero past the truncation.
    pub fn y_pow(&self, j: usize) -> Mod2Class {
        self.monomial(false, j)
    }

    /// `x*y^j`, zero past the truncation.
    pub fn x_y_pow(&self, j: usize) -> Mod2Class {
        self.monomial(true, j)
    }

    /// `x^k`, rewritten through `x^2 = eps*y`.
    pub fn x_pow(&self, k: usize) -> Mod2Class {
        if k >= 2 && !self.epsilon {
            return self.zero();
        }
        self.monomial(k % 2 == 1, k / 2)
    }

    /// `x^delta * y^j`.
    pub fn monomial(&self, delta: bool, j: usize) -> Mod2Class {
        let mut c = self.zero();
        if j <= self.n {
            if delta {
                c.odd.set(j);
            } else {
                c.even.set(j);
            }
        }
        c
    }
}

/// One row of coefficients `c_0 + c_1 y + ... + c_n y^n` as packed bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Row {
    len: usize,
    words: Vec<u64>,
}

impl Row {
    fn zero(n: usize) -> Self {
        let len = n + 1;
        Row { len, words: vec![0; len.div_ceil(64)] }
    }

    fn get(&self, j: usize) -> bool {
        j < self.len && (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    fn set(&mut self, j: usize) {
        self.words[j / 64] |= 1 << (j % 64);
    }

    fn flip(&mut self, j: usize) {
        self.words[j / 64] ^= 1 << (j % 64);
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&j| self.get(j))
    }

    fn xor_assign(&mut self, other: &Row) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn mask_top(&mut self) {
        let spare = self.words.len() * 64 - self.len;
        if spare > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX >> spare;
        }
    }

    /// `self * y^k`, truncated.
    fn shifted(&self, k: usize) -> Row {
        let mut out = Row { len: self.len, words: vec![0; self.words.len()] };
        let (word_shift, bit_shift) = (k / 64, k % 64);
        for i in (word_shift..self.words.len()).rev() {
            let src = i - word_shift;
            let mut w = self.words[src] << bit_shift;
            if bit_shift > 0 && src > 0 {
                w |= self.words[src - 1] >> (64 - bit_shift);
            }
            out.words[i] = w;
        }
        out.mask_top();
        out
    }

    fn mul(&self, other: &Row) -> Row {
        let mut out = Row { len: self.len, words: vec![0; self.words.len()] };
        for i in self.ones() {
            out.xor_assign(&other.shifted(i));
        }
        out
    }

    /// `self * (y + y^2)`, i.e. multiplication by `Sq(y)`.
    fn mul_total_y(&self) -> Row {
        let mut out = self.shifted(1);
        out.xor_assign(&self.shifted(2));
        out
    }

    /// `self(y + y^2)`: substitution evaluated by Horner's rule.
    fn substitute_total_y(&self) -> Row {
        let mut acc = Row { len: self.len, words: vec![0; self.words.len()] };
        for j in (0..self.len).rev() {
            acc = acc.mul_total_y();
            if self.get(j) {
                acc.flip(0);
            }
        }
        acc
    }
}

/// Element of `H^*(L^{2n+1}(2^e); Z/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mod2Class {
    ring: CohomologyRing,
    even: Row,
    odd: Row,
}

impl Mod2Class {
    pub fn ring(&self) -> CohomologyRing {
        self.ring
    }

    /// Coefficient of `x^delta * y^j`.
    pub fn coefficient(&self, delta: bool, j: usize) -> bool {
        if delta {
            self.odd.get(j)
        } else {
            self.even.get(j)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Basis monomials `(delta, j)` with nonzero coefficient, by degree.
    pub fn monomials(&self) -> Vec<(bool, usize)> {
        let mut out: Vec<(bool, usize)> = self
            .even
            .ones()
            .map(|j| (false, j))
            .chain(self.odd.ones().map(|j| (true, j)))
            .collect();
        out.sort_by_key(|&(delta, j)| 2 * j + usize::from(delta));
        out
    }

    /// The degree-`d` part. Each degree holds at most one basis monomial.
    pub fn component(&self, d: usize) -> Mod2Class {
        let delta = d % 2 == 1;
        if self.coefficient(delta, d / 2) {
            self.ring.monomial(delta, d / 2)
        } else {
            self.ring.zero()
        }
    }

    /// Degree when the class is a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.monomials().as_slice() {
            [(delta, j)] => Some(2 * j + usize::from(*delta)),
            _ => None,
        }
    }

    pub fn add(&self, other: &Mod2Class) -> Result<Mod2Class, CohomologyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        out.even.xor_assign(&other.even);
        out.odd.xor_assign(&other.odd);
        Ok(out)
    }

    pub fn multiply(&self, other: &Mod2Class) -> Result<Mod2Class, CohomologyError> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    fn product(&self, other: &Mod2Class) -> Mod2Class {
        let mut even = self.even.mul(&other.even);
        if self.ring.epsilon {
            even.xor_assign(&self.odd.mul(&other.odd).shifted(1));
        }
        let mut odd = self.even.mul(&other.odd);
        odd.xor_assign(&self.odd.mul(&other.even));
        Mod2Class { ring: self.ring, even, odd }
    }

    fn check_ring(&self, other: &Mod2Class) -> Result<(), CohomologyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(CohomologyError::RingMismatch)
        }
    }

    /// `Sq(u) = u_even(Sq y) + Sq(x) * u_odd(Sq y)` with `Sq(y) = y + y^2`
    /// and `Sq(x) = x + eps*y`.
    pub fn total_square(&self) -> Mod2Class {
        let even = self.even.substitute_total_y();
        let odd = self.odd.substitute_total_y();
        let mut out = Mod2Class { ring: self.ring, even, odd: odd.clone() };
        if self.ring.epsilon {
            out.even.xor_assign(&odd.shifted(1));
        }
        out
    }

    /// `Sq^i`, applied to each homogeneous component separately.
    pub fn steenrod_square(&self, i: usize) -> Mod2Class {
        let mut out = self.ring.zero();
        for (delta, j) in self.monomials() {
            let d = 2 * j + usize::from(delta);
            let image = self.ring.monomial(delta, j).total_square().component(d + i);
            out.even.xor_assign(&image.even);
            out.odd.xor_assign(&image.odd);
        }
        out
    }

    /// Multiplicative inverse of a class with constant term 1.
    pub fn inverse(&self) -> Option<Mod2Class> {
        if !self.even.get(0) {
            return None;
        }
        // Newton iteration q <- q*u*q; in characteristic 2 it doubles the
        // number of correct degrees each round.
        let mut q = self.ring.one();
        loop {
            let next = q.product(self).product(&q);
            if next == q {
                return Some(q);
            }
            q = next;
        }
    }
}

impl fmt::Display for Mod2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.monomials();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (delta, j)) in terms.into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            match (delta, j) {
                (false, 0) => write!(f, "1")?,
                (true, 0) => write!(f, "x")?,
                (false, 1) => write!(f, "y")?,
                (true, 1) => write!(f, "x*y")?,
                (false, j) => write!(f, "y^{j}")?,
                (true, j) => write!(f, "x*y^{j}")?,
            }
        }
        Ok(())
    }
}

/// Total tangential Stiefel-Whitney class `(1 + y)^{n+1}`.
pub fn tangential_sw_class(ring: CohomologyRing) -> Mod2Class {
    let one_plus_y = ring.one().add(&ring.y()).expect("same ring");
    let mut w = ring.one();
    for _ in 0..=ring.n {
        w = w.product(&one_plus_y);
    }
    w
}

/// Total normal Stiefel-Whitney class, the inverse of the tangential class.
pub fn normal_sw_class(ring: CohomologyRing) -> Mod2Class {
    tangential_sw_class(ring)
        .inverse()
        .expect("tangential class has constant term 1")
}

/// Spin test through `w_1` and `w_2` read off the tangential class.
pub fn spin_by_sw_class(m: u64, e: u64) -> bool {
    if m == 0 {
        return true;
    }
    let ring = CohomologyRing::new(m, e).expect("m >= 1 and e >= 1");
    let w = tangential_sw_class(ring);
    !w.coefficient(true, 0) && !w.coefficient(false, 1)
}

/// Spin test through Wu's formula: `v_2 = w_2` vanishes exactly when `Sq^2`
/// is zero on `H^{2m-1}`, which is spanned by `x*y^{m-1}`.
pub fn spin_by_wu_class(m: u64, e: u64) -> bool {
    if m == 0 {
        return true;
    }
    let ring = CohomologyRing::new(m, e).expect("m >= 1 and e >= 1");
    let generator = ring.x_y_pow(ring.n() - 1);
    generator.steenrod_square(2).is_zero()
}

/// Whether `L^{2m+1}(2^e)` is spin. Both computations must agree.
pub fn is_spin(m: u64, e: u64) -> bool {
    let by_sw = spin_by_sw_class(m, e);
    let by_wu = spin_by_wu_class(m, e);
    assert_eq!(by_sw, by_wu, "spin routes disagree for m = {m}, e = {e}");
    by_sw
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Lucas: C(a, b) is odd iff b's bits are a subset of a's.
    fn binom_odd(a: usize, b: usize) -> bool {
        b <= a && (a & b) == b
    }

    fn ring(n: u64, e: u64) -> CohomologyRing {
        CohomologyRing::new(n, e).unwrap()
    }

    fn basis(r: CohomologyRing) -> Vec<Mod2Class> {
        (0..=r.n())
            .flat_map(|j| [r.y_pow(j), r.x_y_pow(j)])
            .collect()
    }

    #[test]
    fn product_examples() {
        let r2 = ring(5, 2);
        assert!(r2.x().multiply(&r2.x()).unwrap().is_zero());
        let r1 = ring(5, 1);
        assert_eq!(r1.x().multiply(&r1.x()).unwrap(), r1.y());
        assert_eq!(r1.x_pow(7), r1.x_y_pow(3));
        assert!(r2.x_pow(2).is_zero());
        for a in 0..=5 {
            for b in 0..=5 {
                let p = r2.y_pow(a).multiply(&r2.y_pow(b)).unwrap();
                if a + b <= 5 {
                    assert_eq!(p, r2.y_pow(a + b));
                } else {
                    assert!(p.is_zero());
                }
            }
        }
        assert_eq!(
            r1.x().multiply(&r2.x()),
            Err(CohomologyError::RingMismatch)
        );
        assert!(CohomologyRing::new(0, 1).is_err());
        assert!(CohomologyRing::new(3, 0).is_err());
    }

    #[test]
    fn top_class_is_nonzero() {
        let r = ring(4, 3);
        let top = r.x().multiply(&r.y_pow(4)).unwrap();
        assert_eq!(top.homogeneous_degree(), Some(r.top_degree()));
        assert!(top.multiply(&r.y()).unwrap().is_zero());
    }

    #[test]
    fn square_examples() {
        for n in 2..20u64 {
            for e in 1..4 {
                let r = ring(n, e);
                let n = n as usize;
                let u = r.x_y_pow(n - 1);
                let expected = if (n - 1) % 2 == 1 { r.x_y_pow(n) } else { r.zero() };
                assert_eq!(u.steenrod_square(2), expected);
                assert_eq!(u.steenrod_square(0), u);
            }
        }
        let r = ring(16, 2);
        for j in 0..=16 {
            for i in 0..=16 {
                let sq = r.y_pow(j).steenrod_square(2 * i);
                let expected = if j + i <= 16 && binom_odd(j, i) {
                    r.y_pow(j + i)
                } else {
                    r.zero()
                };
                assert_eq!(sq, expected, "Sq^{} y^{}", 2 * i, j);
                assert!(r.y_pow(j).steenrod_square(2 * i + 1).is_zero());
                if j >= i && j + i <= 16 && !binom_odd(j, i) {
                    assert!(crate::dyadic::nu_binom(&(j as u64), &(i as u64)).unwrap() >= 1);
                }
            }
        }
    }

    #[test]
    fn bockstein_on_x_follows_epsilon() {
        assert_eq!(ring(3, 1).x().steenrod_square(1), ring(3, 1).y());
        assert!(ring(3, 2).x().steenrod_square(1).is_zero());
        assert!(ring(3, 1).y().steenrod_square(1).is_zero());
    }

    #[test]
    fn cartan_formula_on_basis_pairs() {
        for n in 1..=8u64 {
            for e in [1, 2] {
                let r = ring(n, e);
                let b = basis(r);
                let top = r.top_degree();
                let squares: Vec<Vec<Mod2Class>> = b
                    .iter()
                    .map(|u| (0..=top).map(|a| u.steenrod_square(a)).collect())
                    .collect();
                for (ui, u) in b.iter().enumerate() {
                    for (vi, v) in b.iter().enumerate() {
                        let uv = u.multiply(v).unwrap();
                        for i in 0..=top {
                            let mut rhs = r.zero();
                            for a in 0..=i {
                                let term = squares[ui][a].multiply(&squares[vi][i - a]).unwrap();
                                rhs = rhs.add(&term).unwrap();
                            }
                            assert_eq!(uv.steenrod_square(i), rhs, "n={n} e={e} i={i} u={u} v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn total_square_is_multiplicative() {
        for n in 1..=32u64 {
            for e in [1, 2, 5] {
                let r = ring(n, e);
                let b = basis(r);
                let squares: Vec<Mod2Class> = b.iter().map(Mod2Class::total_square).collect();
                for (ui, u) in b.iter().enumerate() {
                    for (vi, v) in b.iter().enumerate() {
                        let lhs = u.multiply(v).unwrap().total_square();
                        assert_eq!(lhs, squares[ui].multiply(&squares[vi]).unwrap(), "n={n} e={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn ring_laws_on_basis_triples() {
        // bilinear laws on a basis cover every class
        for n in 1..=8u64 {
            for e in [1, 2] {
                let r = ring(n, e);
                let b = basis(r);
                for u in &b {
                    assert_eq!(u.multiply(&r.one()).unwrap(), *u);
                    for v in &b {
                        let uv = u.multiply(v).unwrap();
                        assert_eq!(uv, v.multiply(u).unwrap());
                        for w in &b {
                            assert_eq!(uv.multiply(w).unwrap(), u.multiply(&v.multiply(w).unwrap()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn instability() {
        for e in [1, 3] {
            let r = ring(12, e);
            for u in basis(r) {
                let d = u.homogeneous_degree().unwrap();
                assert_eq!(u.steenrod_square(d), u.multiply(&u).unwrap());
                for i in d + 1..=r.top_degree() + 1 {
                    assert!(u.steenrod_square(i).is_zero());
                }
            }
        }
    }

    #[test]
    fn tangential_examples() {
        let w1 = tangential_sw_class(ring(1, 3));
        assert_eq!(w1, ring(1, 3).one());
        let r = ring(2, 2);
        let w2 = tangential_sw_class(r);
        assert_eq!(w2.to_string(), "1 + y + y^2");
        for n in 1..64 {
            let w = tangential_sw_class(ring(n, 2));
            assert_eq!(w.coefficient(false, 1), (n + 1) % 2 == 1);
            for j in 0..=n as usize {
                assert_eq!(w.coefficient(false, j), binom_odd(n as usize + 1, j));
                assert!(!w.coefficient(true, j));
            }
        }
    }

    #[test]
    fn tangential_agrees_with_x_form_for_projective_spaces() {
        // for e = 1 the class is also (1 + x)^{2n+2}
        for n in 1..20u64 {
            let r = ring(n, 1);
            let one_plus_x = r.one().add(&r.x()).unwrap();
            let mut w = r.one();
            for _ in 0..(2 * n + 2) {
                w = w.multiply(&one_plus_x).unwrap();
            }
            assert_eq!(w, tangential_sw_class(r));
        }
    }

    #[test]
    fn normal_class_examples() {
        let r = ring(4, 2);
        let wbar = normal_sw_class(r);
        assert!(wbar.coefficient(false, 3));
        assert_eq!(wbar.multiply(&tangential_sw_class(r)).unwrap(), r.one());
        for n in 1..=512u64 {
            let r = ring(n, 1 + n % 3);
            let wbar = normal_sw_class(r);
            assert_eq!(wbar.multiply(&tangential_sw_class(r)).unwrap(), r.one());
            if n <= 96 {
                let n = n as usize;
                for j in 0..=n {
                    assert_eq!(wbar.coefficient(false, j), binom_odd(n + j, j), "n={n} j={j}");
                }
            }
        }
        for t in 1..=9 {
            let n = 1u64 << t;
            let wbar = normal_sw_class(ring(n, 2));
            assert!(wbar.coefficient(false, n as usize - 1));
        }
        assert!(ring(3, 1).x().inverse().is_none());
    }

    #[test]
    fn spin_examples() {
        for e in 1..=4 {
            assert!(is_spin(3, e));
            assert!(is_spin(0, e));
            assert!(is_spin(1, e));
            assert!(!is_spin(4, e));
            assert!(!is_spin(2, e));
        }
    }

    proptest! {
        #[test]
        fn ring_laws(n in 1u64..64, e in 1u64..4, seed in prop::collection::vec(any::<bool>(), 390)) {
            let r = ring(n, e);
            let len = 2 * (n as usize + 1);
            let pick = |off: usize| {
                let mut c = r.zero();
                for (k, &bit) in seed[off..off + len].iter().enumerate() {
                    if bit {
                        c = c.add(&r.monomial(k % 2 == 1, k / 2)).unwrap();
                    }
                }
                c
            };
            let (u, v, w) = (pick(0), pick(len), pick(2 * len));
            prop_assert_eq!(u.multiply(&v).unwrap(), v.multiply(&u).unwrap());
            prop_assert_eq!(
                u.multiply(&v).unwrap().multiply(&w).unwrap(),
                u.multiply(&v.multiply(&w).unwrap()).unwrap()
            );
            prop_assert_eq!(
                u.multiply(&v.add(&w).unwrap()).unwrap(),
                u.multiply(&v).unwrap().add(&u.multiply(&w).unwrap()).unwrap()
            );
            // the total square is a ring map
            prop_assert_eq!(
                u.multiply(&v).unwrap().total_square(),
                u.total_square().multiply(&v.total_square()).unwrap()
            );
        }
    }
}
