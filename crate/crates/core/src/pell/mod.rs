//! Generalized Pell equations `u^2 - d w^2 = N`.
//!
//! Solutions split into finitely many classes under multiplication by the
//! fundamental unit. [`solve_bounded`] returns one normalized representative
//! per class (and its conjugate), [`orbit_step`] moves along a class, and
//! [`search_constrained`] decides whether any solution meets a set of linear
//! congruences by exhausting the residue period of the unit action.

mod classes;
mod constrained;
mod units;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use classes::{class_representatives, solve_bounded};
pub use constrained::{
    push_negative, push_negative_within, search_constrained, solve_constrained, unit_period,
    ConstrainedOrbit, ConstrainedSearch, LinearCongruence, PellProblem, ResidueCertificate, Seed,
    TypeEquation, DEFAULT_SEARCH_DEPTH,
};
pub use units::{fundamental_unit, negative_unit, sqrt_expansion, FundamentalUnit, SqrtExpansion};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "crate::report::bigint")]
    pub u: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub w: BigInt,
}

impl PellSolution {
    pub fn new(u: impl Into<BigInt>, w: impl Into<BigInt>) -> Self {
        Self {
            u: u.into(),
            w: w.into(),
        }
    }

    /// `u^2 - d w^2`.
    pub fn norm(&self, d: &BigInt) -> BigInt {
        &self.u * &self.u - d * &self.w * &self.w
    }

    pub fn negated(&self) -> Self {
        Self::new(-&self.u, -&self.w)
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.u.clone(), -&self.w)
    }

    /// `(+-u, +-w)` without duplicates.
    pub fn sign_images(&self) -> Vec<PellSolution> {
        let mut out = vec![
            self.clone(),
            self.conjugate(),
            self.negated(),
            self.negated().conjugate(),
        ];
        out.sort();
        out.dedup();
        out
    }

    /// Sign of the real number `u + w sqrt(d)`, for non-square `d`.
    pub fn real_sign(&self, d: &BigInt) -> Ordering {
        let zero = BigInt::zero();
        match (self.u.cmp(&zero), self.w.cmp(&zero)) {
            (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
            (u, w) if u != Ordering::Less && w != Ordering::Less => Ordering::Greater,
            (u, w) if u != Ordering::Greater && w != Ordering::Greater => Ordering::Less,
            (Ordering::Greater, _) => {
                // u > 0 > w
                if self.norm(d).is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            _ => {
                // u < 0 < w
                if self.norm(d).is_positive() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// Ordering by `|w|`, then `u`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.w
            .abs()
            .cmp(&other.w.abs())
            .then_with(|| self.u.cmp(&other.u))
            .then_with(|| self.w.cmp(&other.w))
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Multiply `u + w sqrt(d)` by the fundamental unit (forward) or by its
/// inverse `u0 - w0 sqrt(d)` (backward).
pub fn orbit_step(
    sol: &PellSolution,
    unit: &FundamentalUnit,
    direction: Direction,
) -> PellSolution {
    let (u0, w0, d) = (&unit.u, &unit.w, &unit.d);
    match direction {
        Direction::Forward => {
            PellSolution::new(&sol.u * u0 + d * &sol.w * w0, &sol.u * w0 + &sol.w * u0)
        }
        Direction::Backward => {
            PellSolution::new(&sol.u * u0 - d * &sol.w * w0, &sol.w * u0 - &sol.u * w0)
        }
    }
}

/// Applies `orbit_step` `|k|` times, forward for positive `k`.
pub fn orbit_power(sol: &PellSolution, unit: &FundamentalUnit, k: i64) -> PellSolution {
    let dir = if k >= 0 {
        Direction::Forward
    } else {
        Direction::Backward
    };
    (0..k.unsigned_abs()).fold(sol.clone(), |acc, _| orbit_step(&acc, unit, dir))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit17() -> FundamentalUnit {
        fundamental_unit(&BigInt::from(17)).unwrap()
    }

    #[test]
    fn orbit_step_examples() {
        let unit = unit17();
        let s = PellSolution::new(5, 1);
        let next = orbit_step(&s, &unit, Direction::Forward);
        assert_eq!(next, PellSolution::new(301, 73));
        assert_eq!(next.norm(&BigInt::from(17)), BigInt::from(8));
        assert_eq!(orbit_step(&next, &unit, Direction::Backward), s);
        assert_eq!(
            orbit_step(&PellSolution::new(1, 0), &unit, Direction::Forward),
            PellSolution::new(33, 8)
        );
    }

    #[test]
    fn orbit_power_inverts() {
        let unit = unit17();
        let s = PellSolution::new(3, 1);
        assert_eq!(orbit_power(&orbit_power(&s, &unit, 4), &unit, -4), s);
    }

    #[test]
    fn real_sign_cases() {
        let d = BigInt::from(17);
        let cases = [
            ((5, 1), Ordering::Greater),
            ((-5, -1), Ordering::Less),
            ((5, -1), Ordering::Greater),
            ((-5, 1), Ordering::Less),
            ((3, -1), Ordering::Less),
            ((-3, 1), Ordering::Greater),
            ((0, 0), Ordering::Equal),
        ];
        for ((u, w), expected) in cases {
            assert_eq!(PellSolution::new(u, w).real_sign(&d), expected, "({u},{w})");
        }
    }

    #[test]
    fn sign_images_dedupe() {
        assert_eq!(PellSolution::new(3, 0).sign_images().len(), 2);
        assert_eq!(PellSolution::new(3, 1).sign_images().len(), 4);
    }
}
