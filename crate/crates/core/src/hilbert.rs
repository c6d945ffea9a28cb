//! Beauville-Bogomolov form on `H^2(S[n], Z) = H^2(S, Z) + Z f`, with
//! `f` orthogonal to `H^2(S)` and `f^2 = -2(n-1)`. Only the part spanned by
//! `N(S)` and `f` is modeled.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::{FamilyQuery, Witness};
use crate::lattice::Divisor;
use crate::report::{Check, Relation};

/// `eps = 0` when `n = 1` (isotropic `v`), `1` when `n > 1`.
pub fn corollary_eps(n: i64) -> i64 {
    if n == 1 {
        0
    } else {
        1
    }
}

/// `F + c f` in `H^2(S[n])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertClass {
    pub f_part: Divisor,
    pub f_coeff: BigInt,
    pub n: i64,
}

impl HilbertClass {
    pub fn new(f_part: Divisor, f_coeff: impl Into<BigInt>, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidQuery(format!(
                "Hilbert scheme length n = {n} < 1"
            )));
        }
        Ok(Self {
            f_part,
            f_coeff: f_coeff.into(),
            n,
        })
    }

    /// `h = F + eps f` with the `eps` rule.
    pub fn corollary(f_part: Divisor, n: i64) -> Result<Self> {
        Self::new(f_part, corollary_eps(n), n)
    }

    /// `f^2 = -2(n-1)`.
    pub fn exceptional_square(&self) -> BigInt {
        BigInt::from(-2 * (self.n - 1))
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            f_part: self.f_part.scaled(k),
            f_coeff: &self.f_coeff * k,
            n: self.n,
        }
    }
}

/// `q(F + c f) = F^2 - 2(n-1) c^2`.
pub fn bb_square(h: &HilbertClass) -> BigInt {
    h.f_part.square() + h.exceptional_square() * &h.f_coeff * &h.f_coeff
}

/// `b(F + c f, H) = F.H`.
pub fn bb_pair_with_h(h: &HilbertClass) -> BigInt {
    h.f_part.dot_h()
}

/// `q(h) = +-2a` and `b(h, H) = a mu y (mod 2g-2)`, `a` the twisted rank.
pub(crate) fn bb_checks(w: &Witness, query: &FamilyQuery) -> (Check, Check) {
    let (a, _) = query.ranks();
    let lattice = &w.lattice;
    let target = BigInt::from(2 * a * query.sign.value());
    let m = BigInt::from(lattice.degree());
    let pairing_target = &w.y * a * lattice.mu();
    let n = query.hilbert_length();
    match lattice
        .divisor(w.f.0.clone(), w.f.1.clone())
        .and_then(|f| HilbertClass::corollary(f, n))
    {
        Ok(h) => (
            Check::equal(bb_square(&h), target),
            Check::congruent(bb_pair_with_h(&h), pairing_target, m),
        ),
        Err(_) => (
            Check::failed(Relation::Equal, BigInt::zero(), target),
            Check::failed(Relation::Congruent, w.f.0.clone(), pairing_target),
        ),
    }
}

/// Recomputes the Beauville-Bogomolov values of `w`.
pub fn verify_bb_corollary(w: &Witness, query: &FamilyQuery) -> bool {
    let (q, b) = bb_checks(w, query);
    q.passed && b.passed
}
