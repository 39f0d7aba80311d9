//! Numeric gates behind the feeding bundle embeddings: the embedding gate
//! for `(m - n) * eta_n`, the `lambda` rule, and the Davis-Mahowald carry
//! conditions evaluated symbolically in `N`.

use thiserror::Error;

use crate::dyadic::{alpha, hurwitz_radon, nu, nu_binom_sym, DyadicError, SymbolicCount};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftingError {
    #[error("mu must be 1 or 2, got {0}")]
    MuOutOfRange(u64),
    #[error("ell must be at least {min}, got {ell}")]
    EllTooSmall { ell: u64, min: u64 },
    #[error("lambda must be 0 or 1, got {0}")]
    LambdaOutOfRange(u64),
    #[error("fiber dimension would be negative for mu = {mu}, ell = {ell}, lambda = {lambda}")]
    NegativeFiber { mu: u64, ell: u64, lambda: u64 },
    #[error("embedding gate needs m >= n, got n = {n}, m = {m}")]
    InvalidInstance { n: u64, m: u64 },
    #[error("carry count at ell = {ell} left its closed form: {detail}")]
    ClosedFormMismatch { ell: u64, detail: String },
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
}

/// `1` when `alpha(ell) >= 2` and `ell` is even, else `0`.
pub fn lambda_rule(ell: u64) -> u64 {
    u64::from(alpha(&ell) >= 2 && ell.is_multiple_of(2))
}

/// Parameters of the embedding gate: `L_n ⊂ L_m` with the restricted stable
/// normal bundle represented in fiber dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncajeInstance {
    pub n: u64,
    pub m: u64,
    pub d: u64,
}

impl EncajeInstance {
    pub fn new(n: u64, m: u64, d: u64) -> Result<Self, LiftingError> {
        if m < n {
            return Err(LiftingError::InvalidInstance { n, m });
        }
        Ok(EncajeInstance { n, m, d })
    }

    pub fn codimension_sum(&self) -> u64 {
        2 * self.m + self.d
    }

    /// Whether the gate sits exactly on `2m + d = 4n + 1`.
    pub fn is_boundary(&self) -> bool {
        self.codimension_sum() == 4 * self.n + 1
    }
}

/// Ambient dimension `2m + d + 1` of the embedding `(m - n) * eta_n ⊂ R^{2m+d+1}`,
/// when the numeric conditions allow it.
pub fn encaje_gate(inst: &EncajeInstance) -> Option<u64> {
    let lhs = inst.codimension_sum();
    let threshold = 4 * inst.n + 1;
    let fits = match lhs.cmp(&threshold) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => {
            let sections = hurwitz_radon(&(2 * inst.n + 1)).expect("2n + 1 is odd");
            2 * (inst.m - inst.n) <= sections
        }
        std::cmp::Ordering::Less => false,
    };
    fits.then_some(lhs + 1)
}

/// `n = 2^mu * ell - 1`, `m = 2^mu * (ell + 1) - 1`, `d = 2^{mu+1} * (ell - 1) - lambda`
/// with `lambda` from [`lambda_rule`].
pub fn feeding_params(mu: u64, ell: u64) -> Result<EncajeInstance, LiftingError> {
    feeding_params_with_lambda(mu, ell, lambda_rule(ell))
}

pub fn feeding_params_with_lambda(
    mu: u64,
    ell: u64,
    lambda: u64,
) -> Result<EncajeInstance, LiftingError> {
    if mu != 1 && mu != 2 {
        return Err(LiftingError::MuOutOfRange(mu));
    }
    if ell == 0 {
        return Err(LiftingError::EllTooSmall { ell, min: 1 });
    }
    if lambda > 1 {
        return Err(LiftingError::LambdaOutOfRange(lambda));
    }
    let scale = 1u64 << mu;
    let d = (2 * scale * (ell - 1))
        .checked_sub(lambda)
        .ok_or(LiftingError::NegativeFiber { mu, ell, lambda })?;
    EncajeInstance::new(scale * ell - 1, scale * (ell + 1) - 1, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dm2Check {
    pub ok: bool,
    /// `nu(C(p, 2m + 2))` with `p = 2^N - 4(ell + 1)` and `m = 2ell - 3`.
    pub nu1: SymbolicCount,
    /// `nu(C(p, 2m + 4))`.
    pub nu2: SymbolicCount,
}

/// The three Davis-Mahowald conditions for lifting `-4(ell + 1)H` over
/// `CP^{4ell-1}` to `BO(8(ell - 1) - 1)`, with `epsilon = 3` and `d = 5`.
pub fn dm2_lifting_check(ell: u64) -> Result<Dm2Check, LiftingError> {
    if ell < 2 {
        return Err(LiftingError::EllTooSmall { ell, min: 2 });
    }
    let offset = 4 * (ell + 1);
    let m = 2 * ell - 3;
    let nu1 = nu_binom_sym(&offset, &(2 * m + 2))?;
    let nu2 = nu_binom_sym(&offset, &(2 * m + 4))?;

    let a = alpha(&ell) as i64;
    let expected_nu1 = SymbolicCount::constant(a - 1);
    let expected_nu2 = SymbolicCount::constant(alpha(&(ell - 1)) as i64 + 2);
    let via_valuation = SymbolicCount::constant(a + 1 + nu(&ell)? as i64);
    if nu1 != expected_nu1 {
        return Err(LiftingError::ClosedFormMismatch {
            ell,
            detail: format!("nu1 = {nu1}, expected {expected_nu1}"),
        });
    }
    if nu2 != expected_nu2 || nu2 != via_valuation {
        return Err(LiftingError::ClosedFormMismatch {
            ell,
            detail: format!("nu2 = {nu2}, expected {expected_nu2} and {via_valuation}"),
        });
    }

    let (epsilon, d) = (3i64, 5i64);
    let ok = nu1.eventually_at_least(1) && nu2.eventually_at_least(3) && 2 * m as i64 >= d - epsilon;
    Ok(Dm2Check { ok, nu1, nu2 })
}

/// Smallest `BO` level certified for the `mu = 2` lifting at `ell`.
///
/// `ell = 2^a * u + 3` with `u` odd and `a >= 2` reaches `8(ell-1) - 2`
/// (`u = 1`) or `8(ell-1) - 3` (`u > 1`); otherwise a passing carry check
/// gives `8(ell-1) - 1`, and the fallback is `8(ell-1)`.
pub fn sharper_lifting_level(ell: u64) -> Result<u64, LiftingError> {
    if ell < 2 {
        return Err(LiftingError::EllTooSmall { ell, min: 2 });
    }
    let base = 8 * (ell - 1);
    if ell > 3 {
        let shifted = ell - 3;
        let a = nu(&shifted)?;
        let u = shifted >> a;
        if a >= 2 {
            return Ok(if u == 1 { base - 2 } else { base - 3 });
        }
    }
    Ok(if dm2_lifting_check(ell)?.ok { base - 1 } else { base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::nu_binom;
    use num_bigint::BigUint;

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_rule(6), 1);
        assert_eq!(lambda_rule(5), 0);
        assert_eq!(lambda_rule(4), 0);
        assert_eq!(lambda_rule(1), 0);
        assert_eq!(lambda_rule(10), 1);
    }

    #[test]
    fn feeding_param_examples() {
        assert_eq!(feeding_params(2, 2).unwrap(), EncajeInstance { n: 7, m: 11, d: 8 });
        assert_eq!(feeding_params(1, 6).unwrap(), EncajeInstance { n: 11, m: 13, d: 19 });
        assert_eq!(feeding_params(2, 6).unwrap(), EncajeInstance { n: 23, m: 27, d: 39 });
        assert_eq!(feeding_params(2, 1).unwrap(), EncajeInstance { n: 3, m: 7, d: 0 });
        assert_eq!(
            feeding_params_with_lambda(2, 1, 1),
            Err(LiftingError::NegativeFiber { mu: 2, ell: 1, lambda: 1 })
        );
        assert_eq!(feeding_params(3, 2), Err(LiftingError::MuOutOfRange(3)));
        assert!(feeding_params(1, 0).is_err());
    }

    #[test]
    fn gate_examples() {
        let inst = EncajeInstance::new(11, 15, 16).unwrap();
        assert_eq!(encaje_gate(&inst), Some(47));
        assert_eq!(encaje_gate(&EncajeInstance::new(5, 5, 12).unwrap()), Some(23));
        let on_edge = EncajeInstance { n: 7, m: 11, d: 7 };
        assert!(on_edge.is_boundary());
        // F(15) = 8 and 2(m - n) = 8
        assert_eq!(encaje_gate(&on_edge), Some(30));
        let too_wide = EncajeInstance { n: 7, m: 12, d: 5 };
        assert!(too_wide.is_boundary());
        assert_eq!(encaje_gate(&too_wide), None);
        assert_eq!(encaje_gate(&EncajeInstance { n: 7, m: 8, d: 0 }), None);
        assert!(EncajeInstance::new(5, 4, 0).is_err());
    }

    #[test]
    fn gate_reproduces_feeding_dimensions() {
        for mu in 1..=2u64 {
            for ell in 2..=256u64 {
                let i = (1 << mu) * ell - 1;
                for lambda in [0, lambda_rule(ell)] {
                    let inst = feeding_params_with_lambda(mu, ell, lambda).unwrap();
                    assert_eq!(encaje_gate(&inst), Some(4 * i + 3 - lambda));
                    // the boundary branch is reached exactly in the sharpened case
                    assert_eq!(inst.is_boundary(), lambda == 1);
                }
            }
        }
    }

    #[test]
    fn sharpening_needs_even_ell() {
        // for odd ell with alpha >= 2 the boundary case fails the vector field count
        for mu in 1..=2u64 {
            for ell in [3u64, 5, 7, 11] {
                let inst = feeding_params_with_lambda(mu, ell, 1).unwrap();
                assert_eq!(encaje_gate(&inst), None);
            }
        }
    }

    #[test]
    fn dm2_examples() {
        let c6 = dm2_lifting_check(6).unwrap();
        assert_eq!((c6.ok, c6.nu1, c6.nu2), (true, SymbolicCount::constant(1), SymbolicCount::constant(4)));
        let c4 = dm2_lifting_check(4).unwrap();
        assert_eq!(c4.nu1, SymbolicCount::constant(0));
        assert!(!c4.ok);
        let c3 = dm2_lifting_check(3).unwrap();
        assert_eq!((c3.ok, c3.nu1, c3.nu2), (true, SymbolicCount::constant(1), SymbolicCount::constant(3)));
        // concrete N = 40 witness for ell = 3
        let p = BigUint::from((1u64 << 40) - 16);
        assert_eq!(nu_binom(&p, &BigUint::from(8u32)), Ok(1));
        assert_eq!(nu_binom(&p, &BigUint::from(10u32)), Ok(3));
        assert!(dm2_lifting_check(1).is_err());
    }

    #[test]
    fn dm2_matches_digit_hypothesis() {
        for ell in 2..=4096u64 {
            let c = dm2_lifting_check(ell).unwrap();
            assert_eq!(c.ok, alpha(&ell) >= 2, "ell = {ell}");
        }
    }

    #[test]
    fn sharper_levels() {
        assert_eq!(sharper_lifting_level(7), Ok(46));
        assert_eq!(sharper_lifting_level(15), Ok(109));
        assert_eq!(sharper_lifting_level(4), Ok(24));
        assert_eq!(sharper_lifting_level(6), Ok(39));
        // ell = 5: 5 - 3 = 2 has a = 1, so only the carry check applies
        assert_eq!(sharper_lifting_level(5), Ok(31));
        assert!(sharper_lifting_level(1).is_err());
    }
}
