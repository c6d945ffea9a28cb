//! The rank-two Picard lattice `N(S)` of a polarized K3 surface.
//!
//! With `H^2 = 2g-2` and `G` the primitive generator of `H^perp` (so
//! `G^2 = -(2g-2)d`), every class is written `(xH + yG)/(2g-2)` with
//! `x = mu*y (mod 2g-2)`. The integral basis is `{H, (mu*H + G)/(2g-2)}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{congruent, gcd_i64, is_square_i64};
use crate::error::{Error, Result};

/// Lattice data `(g, d, mu)`; `mu` is kept as its least nonnegative residue
/// modulo `2g-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeConfig {
    g: i64,
    d: i64,
    mu: i64,
    square: bool,
}

impl LatticeConfig {
    pub fn new(g: i64, d: i64, mu: i64) -> Result<Self> {
        if g < 3 {
            return Err(Error::GenusTooSmall(g));
        }
        if d < 1 {
            return Err(Error::NonPositiveDiscriminant(d));
        }
        let m = 2 * g - 2;
        let mu = mu.mod_floor(&m);
        if gcd_i64(mu, m) != 1 {
            return Err(Error::NotAUnit { mu, modulus: m });
        }
        let mu_sq = mu * mu;
        if (mu_sq - d).mod_floor(&(2 * m)) != 0 {
            return Err(Error::CongruenceFailure {
                mu_sq,
                d,
                modulus: 2 * m,
            });
        }
        Ok(Self {
            g,
            d,
            mu,
            square: is_square_i64(d),
        })
    }

    pub fn genus(&self) -> i64 {
        self.g
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn mu(&self) -> i64 {
        self.mu
    }

    /// `H^2 = 2g - 2`.
    pub fn degree(&self) -> i64 {
        2 * self.g - 2
    }

    /// Set when `d` is a perfect square, i.e. `N(S)` represents zero.
    pub fn is_square_discriminant(&self) -> bool {
        self.square
    }

    pub fn require_non_square(&self) -> Result<()> {
        if self.square {
            Err(Error::SquareDiscriminant(self.d))
        } else {
            Ok(())
        }
    }

    pub fn divisor(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Divisor> {
        let (x, y) = (x.into(), y.into());
        let m = BigInt::from(self.degree());
        if !congruent(&x, &(&y * self.mu), &m) {
            return Err(Error::NotInLattice {
                x,
                y,
                modulus: self.degree(),
            });
        }
        Ok(Divisor {
            lattice: *self,
            x,
            y,
        })
    }

    pub fn zero(&self) -> Divisor {
        Divisor {
            lattice: *self,
            x: BigInt::zero(),
            y: BigInt::zero(),
        }
    }

    /// The polarization `H = (2g-2, 0)`.
    pub fn polarization(&self) -> Divisor {
        Divisor {
            lattice: *self,
            x: BigInt::from(self.degree()),
            y: BigInt::zero(),
        }
    }

    /// `G = (0, 2g-2)`, primitive and orthogonal to `H`.
    pub fn orthogonal_generator(&self) -> Divisor {
        Divisor {
            lattice: *self,
            x: BigInt::zero(),
            y: BigInt::from(self.degree()),
        }
    }

    /// `(mu*H + G)/(2g-2)`, the second basis vector.
    pub fn glue_vector(&self) -> Divisor {
        Divisor {
            lattice: *self,
            x: BigInt::from(self.mu),
            y: BigInt::one(),
        }
    }

    /// Gram matrix of `{H, (mu*H + G)/(2g-2)}`.
    pub fn gram(&self) -> [[i64; 2]; 2] {
        let m = self.degree();
        let cross = self.mu;
        // mu^2 = d (mod 2m), so this is an even integer.
        let glue_sq = (self.mu * self.mu - self.d) / m;
        [[m, cross], [cross, glue_sq]]
    }

    /// Gram determinant of the integral basis; equals `-d`.
    pub fn det_check(&self) -> i64 {
        let [[a, b], [c, e]] = self.gram();
        a * e - b * c
    }

    /// A class `D` with `D.H = 1`, showing `gamma(H) = 1`.
    pub fn unit_degree_class(&self) -> Divisor {
        let m = self.degree();
        // mu*y = 1 (mod m)
        let y = BigInt::from(self.mu).extended_gcd(&BigInt::from(m)).x;
        Divisor {
            lattice: *self,
            x: BigInt::one(),
            y: y.mod_floor(&BigInt::from(m)),
        }
    }
}

impl fmt::Display for LatticeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N(g={}, d={}, mu={})", self.g, self.d, self.mu)
    }
}

pub fn make_lattice(g: i64, d: i64, mu: i64) -> Result<LatticeConfig> {
    LatticeConfig::new(g, d, mu)
}

/// All `mu` in `[0, 2g-2)` that are units with `mu^2 = d (mod 4(g-1))`.
pub fn admissible_mus(g: i64, d: i64) -> Vec<i64> {
    if g < 3 {
        return Vec::new();
    }
    let m = 2 * g - 2;
    (1..m)
        .filter(|&mu| gcd_i64(mu, m) == 1 && (mu * mu - d).mod_floor(&(2 * m)) == 0)
        .collect()
}

/// An element `(xH + yG)/(2g-2)` of `N(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor {
    lattice: LatticeConfig,
    x: BigInt,
    y: BigInt,
}

impl Divisor {
    pub fn lattice(&self) -> &LatticeConfig {
        &self.lattice
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn same_lattice(&self, other: &Divisor) -> Result<()> {
        if self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::MixedLattices)
        }
    }

    pub fn inner(&self, other: &Divisor) -> Result<BigInt> {
        self.same_lattice(other)?;
        let num = &self.x * &other.x - &self.y * &other.y * self.lattice.d;
        let (q, r) = num.div_rem(&BigInt::from(self.lattice.degree()));
        debug_assert!(r.is_zero(), "intersection number not integral");
        Ok(q)
    }

    /// `D.D`, always even.
    pub fn square(&self) -> BigInt {
        self.inner(self).expect("same lattice")
    }

    /// `D.H`, which is just the `x` coordinate.
    pub fn dot_h(&self) -> BigInt {
        self.x.clone()
    }

    pub fn try_add(&self, other: &Divisor) -> Result<Divisor> {
        self.same_lattice(other)?;
        Ok(Divisor {
            lattice: self.lattice,
            x: &self.x + &other.x,
            y: &self.y + &other.y,
        })
    }

    pub fn try_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.try_add(&other.scaled(&BigInt::from(-1)))
    }

    pub fn scaled(&self, k: &BigInt) -> Divisor {
        Divisor {
            lattice: self.lattice,
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    /// Coordinates `(alpha, beta)` in the integral basis `{H, (mu*H+G)/(2g-2)}`.
    pub fn basis_coordinates(&self) -> (BigInt, BigInt) {
        let alpha = (&self.x - &self.y * self.lattice.mu) / self.lattice.degree();
        (alpha, self.y.clone())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}H + {}G)/{}", self.x, self.y, self.lattice.degree())
    }
}
