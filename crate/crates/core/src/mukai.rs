//! Algebraic Mukai vectors `(h0, c1, h4)` in `Z + N(S) + Z`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Divisor, LatticeConfig};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub h0: BigInt,
    pub c1: Divisor,
    pub h4: BigInt,
}

impl MukaiVector {
    pub fn new(h0: impl Into<BigInt>, c1: Divisor, h4: impl Into<BigInt>) -> Self {
        Self {
            h0: h0.into(),
            c1,
            h4: h4.into(),
        }
    }

    /// `(r, H, s)`.
    pub fn polarized(lattice: &LatticeConfig, r: i64, s: i64) -> Self {
        Self::new(r, lattice.polarization(), s)
    }

    pub fn lattice(&self) -> &LatticeConfig {
        self.c1.lattice()
    }

    /// Mukai pairing `(v,w) = v1.w1 - (v0 w2 + v2 w0)`.
    pub fn pairing(&self, other: &MukaiVector) -> Result<BigInt> {
        let c = self.c1.inner(&other.c1)?;
        Ok(c - (&self.h0 * &other.h4 + &self.h4 * &other.h0))
    }

    pub fn square(&self) -> BigInt {
        self.pairing(self).expect("same lattice")
    }

    /// Twist by the line bundle `D`:
    /// `(r, c, s) -> (r, c + rD, s + r D^2/2 + D.c)`.
    pub fn tensorize(&self, twist: &Divisor) -> Result<MukaiVector> {
        let dc = twist.inner(&self.c1)?;
        let half_sq = twist.square() / 2;
        let c1 = self.c1.try_add(&twist.scaled(&self.h0))?;
        Ok(MukaiVector {
            h0: self.h0.clone(),
            c1,
            h4: &self.h4 + &self.h0 * half_sq + dc,
        })
    }

    /// `(r, c, s) -> (s, c, r)`.
    pub fn reflect(&self) -> MukaiVector {
        MukaiVector {
            h0: self.h4.clone(),
            c1: self.c1.clone(),
            h4: self.h0.clone(),
        }
    }

    /// `Z v` is primitive iff the coordinates of `v` in the integral basis
    /// have gcd one.
    pub fn is_primitive(&self) -> bool {
        let (alpha, beta) = self.c1.basis_coordinates();
        let g = [&alpha, &beta, &self.h4]
            .into_iter()
            .fold(self.h0.clone(), |acc, c| acc.gcd(c));
        g.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero() && self.h4.is_zero() && self.c1.is_zero()
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h0, self.c1, self.h4)
    }
}

/// The two types of `(r, H, s)`: some twist sends it to `(r, H + rD, +-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

/// Numerical data attached to `v = (r, H, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiSquare {
    /// `v^2 = 2(g - 1 - rs)`.
    pub square: i64,
    /// `dim M_S(v) = v^2 + 2`.
    pub dimension: i64,
    /// Length `n = g - rs` of the matching Hilbert scheme.
    pub hilbert_length: i64,
}

pub fn mukai_square_target(g: i64, r: i64, s: i64) -> Result<MukaiSquare> {
    let rs = r * s;
    if g < rs {
        return Err(Error::NegativeDimension { g, rs });
    }
    let square = 2 * (g - 1 - rs);
    Ok(MukaiSquare {
        square,
        dimension: square + 2,
        hilbert_length: g - rs,
    })
}
