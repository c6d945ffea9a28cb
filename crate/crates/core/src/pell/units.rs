//! Continued fraction of `sqrt(d)` and the units of `Z[sqrt(d)]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::PellSolution;
use crate::arith::is_square;
use crate::error::{Error, Result};

/// `sqrt(d) = [a0; period, period, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtExpansion {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

pub(crate) fn check_pell_discriminant(d: &BigInt) -> Result<()> {
    if *d < BigInt::from(2) || is_square(d) {
        return Err(Error::SquareInput(d.clone()));
    }
    Ok(())
}

/// Expands the quadratic surd `sqrt(d)`. The period closes at the first
/// complete quotient with denominator one, where the partial quotient is
/// `2*a0`.
pub fn sqrt_expansion(d: &BigInt) -> Result<SqrtExpansion> {
    check_pell_discriminant(d)?;
    let a0 = d.sqrt();
    let mut m = BigInt::zero();
    let mut q = BigInt::one();
    let mut a = a0.clone();
    let mut period = Vec::new();
    loop {
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        period.push(a.clone());
        if q.is_one() {
            break;
        }
    }
    debug_assert_eq!(period.last(), Some(&(&a0 * 2)));
    Ok(SqrtExpansion { a0, period })
}

/// Convergent `p/q` after the partial quotients `a0, terms...`.
fn convergent<'a>(a0: &BigInt, terms: impl Iterator<Item = &'a BigInt>) -> (BigInt, BigInt) {
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for a in terms {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    (p, q)
}

/// Minimal solution `(u0, w0)`, `w0 >= 1`, of `u^2 - d w^2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FundamentalUnit {
    #[serde(with = "crate::report::bigint")]
    pub d: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub u: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub w: BigInt,
}

impl FundamentalUnit {
    pub fn as_solution(&self) -> PellSolution {
        PellSolution::new(self.u.clone(), self.w.clone())
    }
}

pub fn fundamental_unit(d: &BigInt) -> Result<FundamentalUnit> {
    let cf = sqrt_expansion(d)?;
    let len = cf.period.len();
    let (p, q) = convergent(&cf.a0, cf.period[..len - 1].iter());
    let (u, w) = if len % 2 == 0 {
        (p, q)
    } else {
        // odd period: p/q has norm -1, square it
        (&p * &p + d * &q * &q, BigInt::from(2) * &p * &q)
    };
    debug_assert!((&u * &u - d * &w * &w).is_one());
    Ok(FundamentalUnit { d: d.clone(), u, w })
}

/// Minimal solution of `u^2 - d w^2 = -1`, which exists iff the period of
/// `sqrt(d)` is odd.
pub fn negative_unit(d: &BigInt) -> Result<Option<PellSolution>> {
    let cf = sqrt_expansion(d)?;
    let len = cf.period.len();
    if len % 2 == 0 {
        return Ok(None);
    }
    let (p, q) = convergent(&cf.a0, cf.period[..len - 1].iter());
    Ok(Some(PellSolution::new(p, q)))
}
