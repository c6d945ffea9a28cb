//! Pell equations with linear congruence side conditions.
//!
//! The unit map `(u, w) -> (u u0 + d w w0, u w0 + w u0)` has determinant
//! `u0^2 - d w0^2 = 1`, so it permutes residues modulo any `M` and has a
//! finite order there. Walking each class image through one full period
//! modulo the lcm of the constraint moduli therefore decides whether a
//! constrained solution exists at all.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::classes::solve_bounded;
use super::units::{check_pell_discriminant, fundamental_unit};
use super::{orbit_power, orbit_step, Direction, FundamentalUnit, PellSolution};
use crate::arith::congruent;
use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::mukai::Sign;

/// `a u + b w = c (mod m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCongruence {
    #[serde(with = "crate::report::bigint")]
    pub u_coeff: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub w_coeff: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub rhs: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub modulus: BigInt,
}

impl LinearCongruence {
    pub fn new(
        u_coeff: impl Into<BigInt>,
        w_coeff: impl Into<BigInt>,
        rhs: impl Into<BigInt>,
        modulus: impl Into<BigInt>,
    ) -> Self {
        let modulus = modulus.into();
        assert!(modulus.is_positive(), "congruence modulus must be positive");
        Self {
            u_coeff: u_coeff.into(),
            w_coeff: w_coeff.into(),
            rhs: rhs.into(),
            modulus,
        }
    }

    pub fn holds(&self, sol: &PellSolution) -> bool {
        congruent(
            &(&self.u_coeff * &sol.u + &self.w_coeff * &sol.w),
            &self.rhs,
            &self.modulus,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellProblem {
    #[serde(with = "crate::report::bigint")]
    pub d: BigInt,
    #[serde(with = "crate::report::bigint")]
    pub n: BigInt,
    pub constraints: Vec<LinearCongruence>,
}

impl PellProblem {
    pub fn new(d: BigInt, n: BigInt, constraints: Vec<LinearCongruence>) -> Result<Self> {
        check_pell_discriminant(&d)?;
        if n.is_zero() {
            return Err(Error::ZeroRightHandSide);
        }
        Ok(Self { d, n, constraints })
    }

    /// lcm of all constraint moduli.
    pub fn modulus(&self) -> BigInt {
        self.constraints
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.modulus))
    }

    /// Side conditions only.
    pub fn admits(&self, sol: &PellSolution) -> bool {
        self.constraints.iter().all(|c| c.holds(sol))
    }

    pub fn satisfies(&self, sol: &PellSolution) -> bool {
        sol.norm(&self.d) == self.n && self.admits(sol)
    }
}

/// Order of the unit map acting on `(Z/M)^2`.
pub fn unit_period(unit: &FundamentalUnit, modulus: &BigInt) -> u64 {
    let start = (BigInt::one().mod_floor(modulus), BigInt::zero());
    let (u0, w0, d) = (
        unit.u.mod_floor(modulus),
        unit.w.mod_floor(modulus),
        unit.d.mod_floor(modulus),
    );
    let mut state = start.clone();
    let mut period = 0u64;
    loop {
        state = residue_step(&state, &u0, &w0, &d, modulus);
        period += 1;
        if state == start {
            return period;
        }
    }
}

fn residue_step(
    (u, w): &(BigInt, BigInt),
    u0: &BigInt,
    w0: &BigInt,
    d: &BigInt,
    m: &BigInt,
) -> (BigInt, BigInt) {
    (
        (u * u0 + d * w * w0).mod_floor(m),
        (u * w0 + w * u0).mod_floor(m),
    )
}

/// Evidence that the constrained search was exhaustive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCertificate {
    #[serde(with = "crate::report::bigint")]
    pub modulus: BigInt,
    /// Order of the unit action modulo `modulus`.
    pub period: u64,
    /// Number of class images walked through one full period.
    pub images: usize,
    /// Total constrained residues met across all images.
    pub hits: usize,
}

/// A constrained solution nearest to its class image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub solution: PellSolution,
    pub image: PellSolution,
    /// Number of unit steps from `image` to `solution`.
    pub offset: i64,
}

#[derive(Clone, Debug)]
pub struct ConstrainedSearch {
    pub unit: FundamentalUnit,
    pub representatives: Vec<PellSolution>,
    pub seeds: Vec<Seed>,
    pub certificate: ResidueCertificate,
}

impl ConstrainedSearch {
    /// Certified empty: no class image meets the constraints in a full period.
    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }
}

fn class_images(problem: &PellProblem) -> Result<Vec<PellSolution>> {
    let reps = solve_bounded(&problem.d, &problem.n)?;
    let mut images: Vec<_> = reps.iter().flat_map(PellSolution::sign_images).collect();
    images.sort();
    images.dedup();
    Ok(images)
}

/// Decides whether `problem` has a solution. For every class image the
/// nearest constrained solutions in each direction become seeds.
pub fn search_constrained(problem: &PellProblem) -> Result<ConstrainedSearch> {
    let unit = fundamental_unit(&problem.d)?;
    let representatives = solve_bounded(&problem.d, &problem.n)?;
    let images = class_images(problem)?;
    let modulus = problem.modulus();
    let period = unit_period(&unit, &modulus);
    let (u0, w0, dm) = (
        unit.u.mod_floor(&modulus),
        unit.w.mod_floor(&modulus),
        problem.d.mod_floor(&modulus),
    );

    let mut seeds: Vec<Seed> = Vec::new();
    let mut hits = 0usize;
    for image in &images {
        let mut state = (image.u.mod_floor(&modulus), image.w.mod_floor(&modulus));
        let mut good = Vec::new();
        for j in 0..period {
            let probe = PellSolution::new(state.0.clone(), state.1.clone());
            if problem.admits(&probe) {
                good.push(j as i64);
            }
            state = residue_step(&state, &u0, &w0, &dm, &modulus);
        }
        hits += good.len();
        let (Some(&first), Some(&last)) = (good.first(), good.last()) else {
            continue;
        };
        for offset in [first, last - period as i64] {
            if seeds
                .iter()
                .any(|s| s.image == *image && s.offset == offset)
            {
                continue;
            }
            let solution = orbit_power(image, &unit, offset);
            debug_assert!(problem.satisfies(&solution));
            seeds.push(Seed {
                solution,
                image: image.clone(),
                offset,
            });
        }
    }
    seeds.sort_by(|a, b| a.solution.canonical_cmp(&b.solution));
    seeds.dedup_by(|a, b| a.solution == b.solution);

    Ok(ConstrainedSearch {
        unit,
        representatives,
        seeds,
        certificate: ResidueCertificate {
            modulus,
            period,
            images: images.len(),
            hits,
        },
    })
}

/// Every constrained solution within `depth` unit steps of a class image,
/// in canonical order (by `|w|`, then `u`).
pub fn solve_constrained(problem: &PellProblem, depth: u32) -> Result<Vec<PellSolution>> {
    let unit = fundamental_unit(&problem.d)?;
    let depth = i64::from(depth);
    let mut out = Vec::new();
    for image in class_images(problem)? {
        let mut cur = orbit_power(&image, &unit, -depth);
        for _ in -depth..=depth {
            if problem.admits(&cur) {
                out.push(cur.clone());
            }
            cur = orbit_step(&cur, &unit, Direction::Forward);
        }
    }
    out.sort_by(PellSolution::canonical_cmp);
    out.dedup();
    Ok(out)
}

/// Successive constrained solutions along one orbit, excluding the start.
/// Stops if a whole residue period passes without a hit.
pub struct ConstrainedOrbit<'a> {
    problem: &'a PellProblem,
    unit: FundamentalUnit,
    current: PellSolution,
    direction: Direction,
    period: u64,
}

impl<'a> ConstrainedOrbit<'a> {
    pub fn new(
        problem: &'a PellProblem,
        start: PellSolution,
        direction: Direction,
    ) -> Result<Self> {
        let unit = fundamental_unit(&problem.d)?;
        let period = unit_period(&unit, &problem.modulus());
        Ok(Self {
            problem,
            unit,
            current: start,
            direction,
            period,
        })
    }
}

impl Iterator for ConstrainedOrbit<'_> {
    type Item = PellSolution;

    fn next(&mut self) -> Option<PellSolution> {
        for _ in 0..self.period {
            self.current = orbit_step(&self.current, &self.unit, self.direction);
            if self.problem.admits(&self.current) {
                return Some(self.current.clone());
            }
        }
        None
    }
}

/// The type equation `(r x + 2(g-1))^2 - d (r y)^2 = 4(g-1)(+-r - r s + g - 1)`
/// in the variables `u = r x + 2(g-1)`, `w = r y`.
///
/// Here `r` is the rank that gets twisted; for the swapped family the caller
/// passes `(s, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeEquation {
    pub lattice: LatticeConfig,
    pub r: i64,
    pub s: i64,
    pub sign: Sign,
}

impl TypeEquation {
    pub fn new(lattice: LatticeConfig, r: i64, s: i64, sign: Sign) -> Self {
        Self {
            lattice,
            r,
            s,
            sign,
        }
    }

    fn degree(&self) -> i64 {
        self.lattice.degree()
    }

    pub fn rhs(&self) -> BigInt {
        let g = self.lattice.genus();
        BigInt::from(4 * (g - 1)) * (self.sign.value() * self.r - self.r * self.s + g - 1)
    }

    /// `w = 0 (mod r)` and `u - mu w = 2g-2 (mod r(2g-2))`; together these
    /// say `x, y` are integers with `x = mu y (mod 2g-2)`.
    pub fn constraints(&self) -> Vec<LinearCongruence> {
        let m = self.degree();
        vec![
            LinearCongruence::new(0, 1, 0, self.r),
            LinearCongruence::new(1, -self.lattice.mu(), m, self.r * m),
        ]
    }

    pub fn problem(&self) -> Result<PellProblem> {
        self.lattice.require_non_square()?;
        PellProblem::new(
            BigInt::from(self.lattice.discriminant()),
            self.rhs(),
            self.constraints(),
        )
    }

    pub fn solution_from_xy(&self, x: &BigInt, y: &BigInt) -> PellSolution {
        PellSolution::new(x * self.r + self.degree(), y * self.r)
    }

    /// `(x, y)` when both divisions are exact.
    pub fn xy(&self, sol: &PellSolution) -> Option<(BigInt, BigInt)> {
        let r = BigInt::from(self.r);
        let (x, rx) = (&sol.u - self.degree()).div_rem(&r);
        let (y, ry) = sol.w.div_rem(&r);
        (rx.is_zero() && ry.is_zero()).then_some((x, y))
    }

    /// Largest `x` with `x < -(2g-2)/max(r-1, 1) - 1`, so that
    /// `(H + (r-1)D).H < 0` with room to spare.
    pub fn default_x_threshold(&self) -> BigInt {
        let m = self.degree();
        BigInt::from(-(m / (self.r - 1).max(1)) - 2)
    }
}

/// Constrained orbit hits examined per class before giving up.
pub const DEFAULT_SEARCH_DEPTH: u32 = 64;

/// Moves `sol` along its constrained sub-orbit until `x <= x_threshold`
/// (with `y != 0`). Orbits of positive `u + w sqrt(d)` have `u` bounded
/// below, so the walk starts from `-sol` when that is admissible.
pub fn push_negative(
    sol: &PellSolution,
    equation: &TypeEquation,
    x_threshold: &BigInt,
) -> Result<PellSolution> {
    push_negative_within(sol, equation, x_threshold, DEFAULT_SEARCH_DEPTH)
}

/// `push_negative` examining at most `depth` constrained orbit points.
pub fn push_negative_within(
    sol: &PellSolution,
    equation: &TypeEquation,
    x_threshold: &BigInt,
    depth: u32,
) -> Result<PellSolution> {
    let problem = equation.problem()?;
    let done =
        |s: &PellSolution| !s.w.is_zero() && equation.xy(s).is_some_and(|(x, _)| x <= *x_threshold);
    if done(sol) {
        return Ok(sol.clone());
    }
    let unreachable = |steps| Error::ThresholdUnreachable {
        threshold: x_threshold.clone(),
        steps,
    };

    let start = [sol.clone(), sol.negated()]
        .into_iter()
        .find(|s| problem.admits(s) && s.real_sign(&problem.d) == Ordering::Less)
        .ok_or_else(|| unreachable(0))?;
    if done(&start) {
        return Ok(start);
    }

    let unit = fundamental_unit(&problem.d)?;
    let fwd = orbit_step(&start, &unit, Direction::Forward);
    let bwd = orbit_step(&start, &unit, Direction::Backward);
    let direction = if fwd.u <= bwd.u {
        Direction::Forward
    } else {
        Direction::Backward
    };
    ConstrainedOrbit::new(&problem, start, direction)?
        .take(depth as usize)
        .find(|s| done(s))
        .ok_or_else(|| unreachable(depth as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lattice;

    fn equation(sign: Sign) -> TypeEquation {
        TypeEquation::new(make_lattice(5, 17, 1).unwrap(), 2, 2, sign)
    }

    #[test]
    fn type_equation_shape() {
        let eq = equation(Sign::Plus);
        assert_eq!(eq.rhs(), BigInt::from(32));
        assert_eq!(equation(Sign::Minus).rhs(), BigInt::from(-32));
        let sol = eq.solution_from_xy(&BigInt::from(1), &BigInt::from(1));
        assert_eq!(sol, PellSolution::new(10, 2));
        assert_eq!(eq.xy(&sol), Some((BigInt::from(1), BigInt::from(1))));
        assert!(eq.problem().unwrap().satisfies(&sol));
        assert_eq!(eq.default_x_threshold(), BigInt::from(-10));
    }

    #[test]
    fn constrained_seeds_for_17() {
        let plus = equation(Sign::Plus);
        let found = solve_constrained(&plus.problem().unwrap(), 4).unwrap();
        assert!(found.contains(&plus.solution_from_xy(&1.into(), &1.into())));

        let minus = equation(Sign::Minus);
        let found = solve_constrained(&minus.problem().unwrap(), 4).unwrap();
        assert!(found.contains(&minus.solution_from_xy(&(-7).into(), &1.into())));

        let search = search_constrained(&plus.problem().unwrap()).unwrap();
        assert!(!search.is_empty());
        assert!(search.certificate.period >= 1);
    }

    #[test]
    fn unit_period_is_order() {
        let unit = fundamental_unit(&BigInt::from(17)).unwrap();
        let m = BigInt::from(16);
        let p = unit_period(&unit, &m);
        let back = orbit_power(&PellSolution::new(1, 0), &unit, p as i64);
        assert_eq!(back.u.mod_floor(&m), BigInt::one());
        assert!(back.w.mod_floor(&m).is_zero());
        assert_eq!(unit_period(&unit, &BigInt::one()), 1);
    }

    #[test]
    fn constraint_free_problem() {
        let p = PellProblem::new(BigInt::from(17), BigInt::from(8), vec![]).unwrap();
        assert_eq!(p.modulus(), BigInt::one());
        let search = search_constrained(&p).unwrap();
        assert!(search
            .seeds
            .iter()
            .any(|s| s.solution == PellSolution::new(5, 1)));
    }

    #[test]
    fn push_negative_examples() {
        let eq = equation(Sign::Plus);
        let start = eq.solution_from_xy(&1.into(), &1.into());
        let pushed = push_negative(&start, &eq, &BigInt::from(-9)).unwrap();
        let (x, y) = eq.xy(&pushed).unwrap();
        assert!(x <= BigInt::from(-9));
        assert!(eq.problem().unwrap().satisfies(&pushed));
        assert!(congruent(&x, &y, &BigInt::from(8)));

        let same = push_negative(&start, &eq, &BigInt::one()).unwrap();
        assert_eq!(same, start);
    }

    #[test]
    fn impossible_residues_give_empty_certificate() {
        // u = 1 (mod 4) and u = 0 (mod 2) cannot both hold
        let p = PellProblem::new(
            BigInt::from(17),
            BigInt::from(8),
            vec![
                LinearCongruence::new(1, 0, 1, 4),
                LinearCongruence::new(1, 0, 0, 2),
            ],
        )
        .unwrap();
        let search = search_constrained(&p).unwrap();
        assert!(search.is_empty());
        assert_eq!(search.certificate.hits, 0);
        assert!(solve_constrained(&p, 6).unwrap().is_empty());
    }
}
