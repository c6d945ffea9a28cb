//! Small integer helpers shared by the lattice and Pell code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

pub fn is_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

pub fn is_square_i64(n: i64) -> bool {
    is_square(&BigInt::from(n))
}

/// `a = b (mod m)` for `m > 0`.
pub fn congruent(a: &BigInt, b: &BigInt, m: &BigInt) -> bool {
    (a - b).mod_floor(m).is_zero()
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
