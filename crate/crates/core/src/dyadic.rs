//! Exact 2-adic combinatorics: binary digit sums, 2-adic valuations,
//! binomial valuations by carry counting, and the symbolic `2^N - a`
//! arithmetic needed for lifting computations with `N` arbitrarily large.
//!
//! Everything here is generic over [`Dyadic`], implemented for `u64`,
//! `u128` and [`BigUint`]. Callers that only touch small parameters use the
//! machine types; the oracle sweeps that reach `2^64 - a` use `BigUint`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision nonnegative integer.
pub type NonNegInt = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("2-adic valuation of zero is undefined")]
    ValuationOfZero,
    #[error("binomial C({a}, {b}) requested with b > a")]
    BinomialOutOfRange { a: String, b: String },
    #[error("alpha(2^N - a) requires a >= 1")]
    ZeroOffset,
    #[error("Hurwitz-Radon number is only defined here for odd spheres, got S^{0}")]
    EvenSphere(String),
    #[error("symbolic count {n_coeff}*N + {constant} is not of the form c*N + k with c in {{0, 1}}")]
    UnsupportedSymbolic { n_coeff: i64, constant: i64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

/// Nonnegative integers with the bit-level operations the 2-adic routines need.
pub trait Dyadic: Clone + Ord + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Number of set bits.
    fn ones(&self) -> u64;
    /// Index of the lowest set bit; `None` for zero.
    fn lowest_set_bit(&self) -> Option<u64>;
    /// Number of consecutive set bits starting from bit 0.
    fn trailing_ones(&self) -> u64;
    fn xor(&self, other: &Self) -> Self;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    /// `self - other`, `None` when `other > self`.
    fn checked_sub(&self, other: &Self) -> Option<Self>;
}

macro_rules! impl_dyadic_prim {
    ($t:ty) => {
        impl Dyadic for $t {
            fn zero() -> Self {
                0
            }
            fn one() -> Self {
                1
            }
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn ones(&self) -> u64 {
                u64::from(self.count_ones())
            }
            fn lowest_set_bit(&self) -> Option<u64> {
                (*self != 0).then(|| u64::from(self.trailing_zeros()))
            }
            fn trailing_ones(&self) -> u64 {
                u64::from(<$t>::trailing_ones(*self))
            }
            fn xor(&self, other: &Self) -> Self {
                self ^ other
            }
            fn checked_add(&self, other: &Self) -> Option<Self> {
                <$t>::checked_add(*self, *other)
            }
            fn checked_sub(&self, other: &Self) -> Option<Self> {
                <$t>::checked_sub(*self, *other)
            }
        }
    };
}

impl_dyadic_prim!(u64);
impl_dyadic_prim!(u128);

impl Dyadic for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ones(&self) -> u64 {
        self.count_ones()
    }
    fn lowest_set_bit(&self) -> Option<u64> {
        self.trailing_zeros()
    }
    fn trailing_ones(&self) -> u64 {
        let mut i = 0;
        while self.bit(i) {
            i += 1;
        }
        i
    }
    fn xor(&self, other: &Self) -> Self {
        self ^ other
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        (other <= self).then(|| self - other)
    }
}

/// Binary digit sum.
pub fn alpha<T: Dyadic>(n: &T) -> u64 {
    n.ones()
}

/// Exponent of the largest power of 2 dividing `n`.
pub fn nu<T: Dyadic>(n: &T) -> Result<u64, DyadicError> {
    n.lowest_set_bit().ok_or(DyadicError::ValuationOfZero)
}

/// 2-adic valuation of `C(a, b)`, counted as the carries in the base-2
/// addition `b + (a - b)`.
///
/// The carry into bit `i` is bit `i` of `b ^ (a - b) ^ a`, so the carry count
/// is the popcount of that word. The binomial itself is never formed.
pub fn nu_binom<T: Dyadic>(a: &T, b: &T) -> Result<u64, DyadicError> {
    let rest = a
        .checked_sub(b)
        .ok_or_else(|| DyadicError::BinomialOutOfRange {
            a: a.to_string(),
            b: b.to_string(),
        })?;
    Ok(b.xor(&rest).xor(a).ones())
}

/// Integer of the form `n_coeff * N + constant`, meaningful for every
/// sufficiently large `N`. Only `n_coeff` in `{0, 1}` is representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicCount {
    n_coeff: i64,
    constant: i64,
}

impl SymbolicCount {
    pub fn new(n_coeff: i64, constant: i64) -> Result<Self, DyadicError> {
        if n_coeff == 0 || n_coeff == 1 {
            Ok(SymbolicCount { n_coeff, constant })
        } else {
            Err(DyadicError::UnsupportedSymbolic { n_coeff, constant })
        }
    }

    pub fn constant(value: i64) -> Self {
        SymbolicCount { n_coeff: 0, constant: value }
    }

    /// `N + offset`.
    pub fn large_n(offset: i64) -> Self {
        SymbolicCount { n_coeff: 1, constant: offset }
    }

    pub fn n_coeff(&self) -> i64 {
        self.n_coeff
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    /// The value when no `N` term survives.
    pub fn as_constant(&self) -> Option<i64> {
        (self.n_coeff == 0).then_some(self.constant)
    }

    pub fn checked_add(self, rhs: SymbolicCount) -> Result<SymbolicCount, DyadicError> {
        let constant = self
            .constant
            .checked_add(rhs.constant)
            .ok_or(DyadicError::Overflow("symbolic addition"))?;
        SymbolicCount::new(self.n_coeff + rhs.n_coeff, constant)
    }

    pub fn checked_sub(self, rhs: SymbolicCount) -> Result<SymbolicCount, DyadicError> {
        let constant = self
            .constant
            .checked_sub(rhs.constant)
            .ok_or(DyadicError::Overflow("symbolic subtraction"))?;
        SymbolicCount::new(self.n_coeff - rhs.n_coeff, constant)
    }

    /// Value at a concrete `N`.
    pub fn eval(&self, n: u64) -> i128 {
        i128::from(self.n_coeff) * i128::from(n) + i128::from(self.constant)
    }

    /// Whether `self >= bound` holds for all sufficiently large `N`.
    pub fn eventually_at_least(&self, bound: i64) -> bool {
        self.n_coeff == 1 || self.constant >= bound
    }
}

impl fmt::Display for SymbolicCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n_coeff, self.constant) {
            (0, c) => write!(f, "{c}"),
            (_, 0) => write!(f, "N"),
            (_, c) if c < 0 => write!(f, "N - {}", -c),
            (_, c) => write!(f, "N + {c}"),
        }
    }
}

/// `alpha(2^N - a) = N - alpha(a - 1)` for `N` large.
pub fn alpha_sym_pow_minus<T: Dyadic>(a: &T) -> Result<SymbolicCount, DyadicError> {
    let pred = a.checked_sub(&T::one()).ok_or(DyadicError::ZeroOffset)?;
    Ok(SymbolicCount::large_n(-small(alpha(&pred))?))
}

/// `nu(C(2^N - a, b))` for `N` large.
///
/// Evaluated along `alpha(b) + alpha(2^N - a - b) - alpha(2^N - a)`; the two
/// `N` terms cancel, leaving `alpha(b) + alpha(a - 1) - alpha(a + b - 1)`.
pub fn nu_binom_sym<T: Dyadic>(a: &T, b: &T) -> Result<SymbolicCount, DyadicError> {
    let top = alpha_sym_pow_minus(a)?;
    let shifted = a.checked_add(b).ok_or(DyadicError::Overflow("a + b"))?;
    let rest = alpha_sym_pow_minus(&shifted)?;
    SymbolicCount::constant(small(alpha(b))?)
        .checked_add(rest)?
        .checked_sub(top)
}

fn small(v: u64) -> Result<i64, DyadicError> {
    i64::try_from(v).map_err(|_| DyadicError::Overflow("digit count"))
}

/// Unique `(a, b)` with `c = 4a + b` and `0 <= b <= 3`.
pub fn radon_pair(c: u64) -> (u64, u64) {
    (c / 4, c % 4)
}

/// Maximal number of everywhere linearly independent vector fields on the odd
/// sphere `S^t`: `8a + 2^b - 1` where `nu(t + 1) = 4a + b`.
pub fn hurwitz_radon<T: Dyadic>(t: &T) -> Result<u64, DyadicError> {
    // For odd t, nu(t + 1) is the run of trailing ones of t.
    if t.lowest_set_bit() != Some(0) {
        return Err(DyadicError::EvenSphere(t.to_string()));
    }
    let (a, b) = radon_pair(t.trailing_ones());
    Ok(8 * a + (1 << b) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Legendre: nu(n!) = n - alpha(n).
    fn nu_factorial(n: u64) -> u64 {
        let mut total = 0;
        let mut p = 2;
        while p <= n {
            total += n / p;
            p *= 2;
        }
        total
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&0u64), 0);
        assert_eq!(alpha(&23u64), 4);
        for t in 0..64 {
            assert_eq!(alpha(&(1u64 << t)), 1);
        }
        assert_eq!(alpha(&(BigUint::from(1u32) << 64u32)), 1);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(&1u64), Ok(0));
        assert_eq!(nu(&48u64), Ok(4));
        assert_eq!(nu(&(BigUint::from(3u32) << 70u32)), Ok(70));
        assert_eq!(nu(&0u64), Err(DyadicError::ValuationOfZero));
        assert_eq!(nu(&BigUint::from(0u32)), Err(DyadicError::ValuationOfZero));
    }

    #[test]
    fn nu_binom_examples() {
        // C(10, 4) = 210 = 2 * 105
        assert_eq!(nu_binom(&10u64, &4u64), Ok(1));
        assert_eq!(nu_binom(&37u64, &0u64), Ok(0));
        for t in 1..40u64 {
            let oracle = nu_factorial(1 << t) - nu_factorial((1 << t) - 1);
            assert_eq!(oracle, t);
            assert_eq!(nu_binom(&(1u64 << t), &1u64), Ok(oracle));
        }
        assert!(matches!(
            nu_binom(&3u64, &4u64),
            Err(DyadicError::BinomialOutOfRange { .. })
        ));
    }

    #[test]
    fn nu_binom_matches_legendre_small() {
        for a in 0..=200u64 {
            for b in 0..=a {
                let oracle = nu_factorial(a) - nu_factorial(b) - nu_factorial(a - b);
                assert_eq!(nu_binom(&a, &b).unwrap(), oracle, "C({a},{b})");
            }
        }
    }

    #[test]
    fn symbolic_alpha_examples() {
        assert_eq!(alpha_sym_pow_minus(&1u64), Ok(SymbolicCount::large_n(0)));
        // alpha(2^30 - 4) = 28 and alpha(2^30 - 6) = 28
        let n = 30;
        assert_eq!(alpha(&((1u64 << n) - 4)), 28);
        assert_eq!(alpha(&((1u64 << n) - 6)), 28);
        assert_eq!(alpha_sym_pow_minus(&4u64).unwrap().eval(n), 28);
        assert_eq!(alpha_sym_pow_minus(&6u64).unwrap().eval(n), 28);
        assert_eq!(alpha_sym_pow_minus(&0u64), Err(DyadicError::ZeroOffset));
    }

    #[test]
    fn symbolic_binomial_examples() {
        let ell = 6u64;
        let a = 4 * (ell + 1);
        assert_eq!(nu_binom_sym(&a, &(4 * ell - 2)), Ok(SymbolicCount::constant(4)));
        assert_eq!(nu_binom_sym(&a, &(4 * ell - 4)), Ok(SymbolicCount::constant(1)));
        assert_eq!(nu_binom_sym(&a, &0u64), Ok(SymbolicCount::constant(0)));
        // concrete check at N = 40
        let p = (1u64 << 40) - a;
        assert_eq!(nu_binom(&p, &(4 * ell - 2)), Ok(4));
    }

    #[test]
    fn symbolic_forms_are_restricted() {
        assert!(SymbolicCount::new(2, 0).is_err());
        assert!(SymbolicCount::new(-1, 3).is_err());
        let n = SymbolicCount::large_n(0);
        assert!(n.checked_add(n).is_err());
        assert!(SymbolicCount::constant(0).checked_sub(n).is_err());
        assert_eq!(n.checked_sub(n), Ok(SymbolicCount::constant(0)));
        assert_eq!(SymbolicCount::large_n(-2).to_string(), "N - 2");
        assert_eq!(SymbolicCount::constant(-3).to_string(), "-3");
    }

    #[test]
    fn hurwitz_radon_examples() {
        assert_eq!(hurwitz_radon(&7u64), Ok(7));
        assert_eq!(hurwitz_radon(&1u64), Ok(1));
        assert_eq!(hurwitz_radon(&3u64), Ok(3));
        // S^15: nu(16) = 4 -> a = 1, b = 0 -> 8
        assert_eq!(hurwitz_radon(&15u64), Ok(8));
        assert_eq!(hurwitz_radon(&u64::MAX), Ok(8 * 16 - 1 + 1));
        for n in 0..20u64 {
            assert!(hurwitz_radon(&(2 * n)).is_err());
        }
        assert_eq!(radon_pair(0), (0, 0));
        assert_eq!(radon_pair(3), (0, 3));
        assert_eq!(radon_pair(9), (2, 1));
    }

    #[test]
    fn hurwitz_radon_depends_on_valuation_only() {
        for t in (1..(1u64 << 16)).step_by(2) {
            let c = nu(&(t + 1)).unwrap();
            let f = hurwitz_radon(&t).unwrap();
            if c <= 3 {
                assert!(f >= c);
            }
            // the same valuation on a different odd cofactor gives the same F
            let other = (3u64 << c) - 1;
            assert_eq!(hurwitz_radon(&other).unwrap(), f);
        }
    }

    proptest! {
        #[test]
        fn carry_identity(a in 0u64..1 << 40, b in 0u64..1 << 40) {
            let (a, b) = if a >= b { (a, b) } else { (b, a) };
            let via_alpha = alpha(&b) + alpha(&(a - b)) - alpha(&a);
            prop_assert_eq!(nu_binom(&a, &b).unwrap(), via_alpha);
        }

        #[test]
        fn wide_types_agree(a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = if a >= b { (a, b) } else { (b, a) };
            let big = nu_binom(&BigUint::from(a), &BigUint::from(b)).unwrap();
            prop_assert_eq!(nu_binom(&a, &b).unwrap(), big);
            prop_assert_eq!(nu_binom(&u128::from(a), &u128::from(b)).unwrap(), big);
        }

        #[test]
        fn predecessor_identity(a in 1u64..u64::MAX) {
            prop_assert_eq!(alpha(&(a - 1)) + 1, alpha(&a) + nu(&a).unwrap());
        }
    }
}
