//! Class representatives for `u^2 - d w^2 = N`.
//!
//! Representatives come from the Lagrange-Matthews-Mollin reduction: for
//! every `f` with `f^2 | N` and every square root `z` of `d` modulo
//! `|N/f^2|`, the continued fraction of `(z + sqrt(d))/|N/f^2|` either hits a
//! complete quotient with denominator `+-1` inside its period (yielding a
//! primitive solution) or the class is empty. The representatives are then
//! moved along their orbits into the classical bounded window
//! `0 <= w <= W(d, N, u0)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::units::{check_pell_discriminant, fundamental_unit, negative_unit};
use super::{orbit_step, Direction, FundamentalUnit, PellSolution};
use crate::error::{Error, Result};

/// `floor((p + sqrt(d)) / q)` for non-square `d`, `q != 0`.
fn surd_floor(p: &BigInt, q: &BigInt, sqrt_floor: &BigInt) -> BigInt {
    let num: BigInt = p + sqrt_floor;
    if q.is_positive() {
        num.div_floor(q)
    } else {
        // (p + sqrt d)/q = -(p + sqrt d)/|q|, and the inner value is never an integer
        let neg_q: BigInt = -q;
        let inner: BigInt = num.div_floor(&neg_q);
        -(inner + 1u32)
    }
}

/// Runs the PQa recurrence from `(p0 + sqrt d)/q0` and returns
/// `(G_{i-1}, B_{i-1})` for the first `i >= 1` with `Q_i = +-1`, or `None`
/// once the expansion cycles without reaching one.
fn pqa_unit_denominator(p0: &BigInt, q0: &BigInt, d: &BigInt) -> Option<(BigInt, BigInt)> {
    let sqrt_floor = d.sqrt();
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let (mut g2, mut g1) = (-p0.clone(), q0.clone());
    let (mut b2, mut b1) = (BigInt::one(), BigInt::zero());
    let mut seen = HashSet::new();
    for i in 0usize.. {
        if i >= 1 && q.abs().is_one() {
            return Some((g1, b1));
        }
        if !seen.insert((p.clone(), q.clone())) {
            return None;
        }
        let a = surd_floor(&p, &q, &sqrt_floor);
        let g = &a * &g1 + &g2;
        let b = &a * &b1 + &b2;
        g2 = std::mem::replace(&mut g1, g);
        b2 = std::mem::replace(&mut b1, b);
        let p_next = &a * &q - &p;
        q = (d - &p_next * &p_next) / &q;
        p = p_next;
    }
    unreachable!()
}

/// One solution per class of primitive-times-`f` solutions, unnormalized.
pub fn class_representatives(d: &BigInt, n: &BigInt) -> Result<Vec<PellSolution>> {
    check_pell_discriminant(d)?;
    if n.is_zero() {
        return Err(Error::ZeroRightHandSide);
    }
    let neg_unit = negative_unit(d)?;
    let mut reps = Vec::new();
    let abs_n = n.abs();
    let mut f = BigInt::one();
    while &f * &f <= abs_n {
        let f_sq = &f * &f;
        if (n % &f_sq).is_zero() {
            let m = n / &f_sq;
            let abs_m = m.abs();
            let lo = -((&abs_m - 1u32) / 2u32);
            let hi = &abs_m / 2u32;
            let mut z = lo;
            while z <= hi {
                if (&z * &z - d).mod_floor(&abs_m).is_zero() {
                    if let Some((r, s)) = pqa_unit_denominator(&z, &abs_m, d) {
                        let norm = &r * &r - d * &s * &s;
                        if norm == m {
                            reps.push(PellSolution::new(&f * r, &f * s));
                        } else if norm == -&m {
                            if let Some(t) = &neg_unit {
                                reps.push(PellSolution::new(
                                    &f * (&r * &t.u + &s * &t.w * d),
                                    &f * (&r * &t.w + &s * &t.u),
                                ));
                            }
                        }
                    }
                }
                z += 1;
            }
        }
        f += 1;
    }
    debug_assert!(reps.iter().all(|s| s.norm(d) == *n));
    Ok(reps)
}

/// Whether `(u, w)` lies in the bounded window: `u, w >= 0` and
/// `2 d w^2 <= N (u0 - 1)` for `N > 0`, `2 d w^2 <= -N (u0 + 1)` for `N < 0`.
fn in_window(sol: &PellSolution, n: &BigInt, unit: &FundamentalUnit) -> bool {
    if sol.u.is_negative() || sol.w.is_negative() {
        return false;
    }
    let lhs = BigInt::from(2) * &unit.d * &sol.w * &sol.w;
    let rhs = if n.is_positive() {
        n * (&unit.u - 1)
    } else {
        -n * (&unit.u + 1)
    };
    lhs <= rhs
}

/// Walks along the orbit of `sol` to the element with least `|w|`.
fn orbit_minimum(sol: &PellSolution, unit: &FundamentalUnit) -> PellSolution {
    let mut cur = sol.clone();
    loop {
        let fwd = orbit_step(&cur, unit, Direction::Forward);
        let bwd = orbit_step(&cur, unit, Direction::Backward);
        let best = if fwd.w.abs() <= bwd.w.abs() { fwd } else { bwd };
        if best.w.abs() < cur.w.abs() {
            cur = best;
        } else {
            return cur;
        }
    }
}

/// All solutions with `u >= 0` and `0 <= w <= W(d, N, u0)`, sorted by
/// `(w, u)`. Together with their sign images they generate every solution
/// under the unit action.
pub fn solve_bounded(d: &BigInt, n: &BigInt) -> Result<Vec<PellSolution>> {
    let unit = fundamental_unit(d)?;
    let reps = class_representatives(d, n)?;
    let mut out = Vec::new();
    for rep in &reps {
        for image in rep.sign_images() {
            let base = orbit_minimum(&image, &unit);
            let mut cand = super::orbit_power(&base, &unit, -2);
            for _ in -2..=2 {
                if in_window(&cand, n, &unit) {
                    out.push(cand.clone());
                }
                cand = orbit_step(&cand, &unit, Direction::Forward);
            }
        }
    }
    out.sort_by(|a, b| a.w.cmp(&b.w).then_with(|| a.u.cmp(&b.u)));
    out.dedup();
    Ok(out)
}
