//! Determinant families `D+-` and `tilde-D+-`.
//!
//! `d` belongs to `D+-` for `(g, r, s)` when, for some admissible `mu`, the
//! type equation `(rx + 2(g-1))^2 - d (ry)^2 = 4(g-1)(+-r - rs + g - 1)`
//! has a solution with `y != 0` and `x = mu y (mod 2g-2)`. The tilde family
//! is the same with `r` and `s` exchanged.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_square, is_square_i64};
use crate::error::{Error, Result};
use crate::hilbert;
use crate::lattice::{admissible_mus, LatticeConfig};
use crate::mukai::{MukaiVector, Sign};
use crate::pell::{
    push_negative_within, search_constrained, ConstrainedOrbit, Direction, PellSolution,
    ResidueCertificate, TypeEquation, DEFAULT_SEARCH_DEPTH,
};
use crate::report::{Check, Relation, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyQuery {
    pub g: i64,
    pub r: i64,
    pub s: i64,
    pub sign: Sign,
    /// Use the swapped family: twist `(s, H, r)` by `s D`.
    pub tilde: bool,
}

impl FamilyQuery {
    pub fn new(g: i64, r: i64, s: i64, sign: Sign, tilde: bool) -> Self {
        Self {
            g,
            r,
            s,
            sign,
            tilde,
        }
    }

    /// `g >= 3`, `r, s >= 1`, `g > rs`.
    pub fn validate(&self) -> Result<()> {
        if self.g < 3 {
            return Err(Error::GenusTooSmall(self.g));
        }
        if self.r < 1 || self.s < 1 {
            return Err(Error::InvalidQuery(format!(
                "r and s must be positive, got r={} s={}",
                self.r, self.s
            )));
        }
        let rs = self.r * self.s;
        if self.g < rs {
            return Err(Error::NegativeDimension { g: self.g, rs });
        }
        if self.g == rs {
            return Err(Error::InvalidQuery(format!(
                "g = rs = {rs}: the Hilbert scheme S[0] is a point"
            )));
        }
        Ok(())
    }

    /// `(twisted rank, other rank)`: `(r, s)`, or `(s, r)` for the tilde family.
    pub fn ranks(&self) -> (i64, i64) {
        if self.tilde {
            (self.s, self.r)
        } else {
            (self.r, self.s)
        }
    }

    /// Length `n = g - rs` of the Hilbert scheme.
    pub fn hilbert_length(&self) -> i64 {
        self.g - self.r * self.s
    }

    pub fn equation(&self, lattice: LatticeConfig) -> TypeEquation {
        let (a, b) = self.ranks();
        TypeEquation::new(lattice, a, b, self.sign)
    }

    /// The vector that gets twisted: `(r, H, s)`, or `(s, H, r)` for tilde.
    pub fn source_vector(&self, lattice: &LatticeConfig) -> MukaiVector {
        let (a, b) = self.ranks();
        MukaiVector::polarized(lattice, a, b)
    }

    /// `(2g-2) + a(+-2 - 2b)` with `(a, b) = ranks()`.
    pub fn f_square_target(&self) -> BigInt {
        let (a, b) = self.ranks();
        BigInt::from(2 * self.g - 2 + a * (2 * self.sign.value() - 2 * b))
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        Self { sign, ..*self }
    }
}

impl fmt::Display for FamilyQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}D{} for v=({}, H, {}), g={}",
            if self.tilde { "tilde-" } else { "" },
            self.sign.symbol(),
            self.r,
            self.s,
            self.g
        )
    }
}

/// Certified `(d, mu, sign, D, F)` with every recomputed identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub query: FamilyQuery,
    pub lattice: LatticeConfig,
    /// Coordinates of `D = (xH + yG)/(2g-2)`.
    pub x: BigInt,
    pub y: BigInt,
    /// Coordinates of `F = H + rD` (or `H + sD` for tilde).
    pub f: (BigInt, BigInt),
    pub x_threshold: BigInt,
    pub report: VerificationReport,
}

impl Witness {
    /// Builds a witness from raw coordinates and verifies it.
    pub fn assemble(
        query: FamilyQuery,
        lattice: LatticeConfig,
        twist: (BigInt, BigInt),
        f: (BigInt, BigInt),
        x_threshold: BigInt,
    ) -> Witness {
        let mut w = Witness {
            query,
            lattice,
            x: twist.0,
            y: twist.1,
            f,
            x_threshold,
            report: placeholder_report(),
        };
        w.report = verify_witness(&w, &query);
        w
    }

    fn from_twist(
        query: FamilyQuery,
        lattice: LatticeConfig,
        x: BigInt,
        y: BigInt,
        x_threshold: BigInt,
    ) -> Witness {
        let (a, _) = query.ranks();
        let m = lattice.degree();
        let f = (&x * a + m, &y * a);
        Self::assemble(query, lattice, (x, y), f, x_threshold)
    }

    pub fn d(&self) -> i64 {
        self.lattice.discriminant()
    }

    pub fn mu(&self) -> i64 {
        self.lattice.mu()
    }

    pub fn sign(&self) -> Sign {
        self.query.sign
    }

    pub fn is_valid(&self) -> bool {
        self.report.all_passed()
    }

    /// `eps` of `h = F + eps f`: zero exactly when `n = 1`.
    pub fn eps(&self) -> i64 {
        hilbert::corollary_eps(self.query.hilbert_length())
    }

    /// Pell variables `(u, w) = (a x + 2g - 2, a y)`.
    pub fn pell_solution(&self) -> PellSolution {
        self.query
            .equation(self.lattice)
            .solution_from_xy(&self.x, &self.y)
    }
}

fn placeholder_report() -> VerificationReport {
    let c = Check::failed(Relation::Equal, BigInt::zero(), BigInt::zero());
    VerificationReport {
        pell_residual: c.clone(),
        congruence: c.clone(),
        f_square: c.clone(),
        f_dot_h: c.clone(),
        threshold: c.clone(),
        type_vector: c.clone(),
        primitive: c.clone(),
        bb_square: c.clone(),
        bb_pairing: c,
    }
}

/// Raw `(x1 x2 - d y1 y2)/(2g-2)`, `None` if not integral.
fn raw_inner(
    lattice: &LatticeConfig,
    a: &(BigInt, BigInt),
    b: &(BigInt, BigInt),
) -> Option<BigInt> {
    let num = &a.0 * &b.0 - &a.1 * &b.1 * lattice.discriminant();
    let (q, r) = num.div_rem(&BigInt::from(lattice.degree()));
    r.is_zero().then_some(q)
}

/// Recomputes every identity a witness must satisfy. Works from the raw
/// coordinates so that corrupted witnesses produce a report, not a panic.
pub fn verify_witness(w: &Witness, query: &FamilyQuery) -> VerificationReport {
    let lattice = &w.lattice;
    let (a, _) = query.ranks();
    let m = BigInt::from(lattice.degree());
    let mu = BigInt::from(lattice.mu());
    let eq = query.equation(*lattice);

    let sol = eq.solution_from_xy(&w.x, &w.y);
    let pell_residual = Check::equal(
        sol.norm(&BigInt::from(lattice.discriminant())) - eq.rhs(),
        BigInt::zero(),
    );

    let congruence = Check::congruent(w.x.clone(), &mu * &w.y, m.clone());

    let f_square = match raw_inner(lattice, &w.f, &w.f) {
        Some(sq) if lattice.divisor(w.f.0.clone(), w.f.1.clone()).is_ok() => {
            Check::equal(sq, query.f_square_target())
        }
        other => Check::failed(
            Relation::Equal,
            other.unwrap_or_default(),
            query.f_square_target(),
        ),
    };

    let ay = &w.y * a;
    let f_dot_h = Check::congruent(w.f.0.clone(), &ay * &mu, m.clone());

    let threshold = Check::at_most(w.x.clone(), w.x_threshold.clone());

    let sign_value = BigInt::from(query.sign.value());
    let type_vector = match (
        lattice.divisor(w.x.clone(), w.y.clone()),
        lattice.divisor(w.f.0.clone(), w.f.1.clone()),
    ) {
        (Ok(twist), Ok(f)) => {
            let source = query.source_vector(lattice);
            let image = source.tensorize(&twist).expect("same lattice");
            let mut c = Check::equal(image.h4.clone(), sign_value);
            c.passed &= image.h0 == BigInt::from(a) && image.c1 == f;
            c
        }
        _ => Check::failed(Relation::Equal, BigInt::zero(), sign_value),
    };

    let source = query.source_vector(lattice);
    let (alpha, beta) = source.c1.basis_coordinates();
    let gcd = [&alpha, &beta, &source.h4]
        .into_iter()
        .fold(source.h0.clone(), |acc, c| acc.gcd(c));
    let primitive = Check::equal(gcd, BigInt::one());

    let (bb_square, bb_pairing) = hilbert::bb_checks(w, query);

    VerificationReport {
        pell_residual,
        congruence,
        f_square,
        f_dot_h,
        threshold,
        type_vector,
        primitive,
        bb_square,
        bb_pairing,
    }
}

/// What happened for one admissible `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuStatus {
    /// A witness passing every check.
    Witness,
    /// A solution exists but no admissible orbit reaches the `D.H` threshold;
    /// the witness is kept with its failing threshold check.
    ThresholdUnreachable,
    /// The right-hand side vanishes, so only `y = 0` can occur.
    DegenerateRhs,
    /// Certified empty by one full residue period over all class images.
    Empty(ResidueCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuOutcome {
    pub mu: i64,
    pub status: MuStatus,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub query: FamilyQuery,
    pub d: i64,
    pub outcomes: Vec<MuOutcome>,
}

impl Membership {
    /// `d` is in the family for some admissible `mu`.
    pub fn is_member(&self) -> bool {
        self.outcomes.iter().any(|o| o.witness.is_some())
    }

    /// The first fully verified witness, else the first solution found.
    pub fn witness(&self) -> Option<&Witness> {
        let mut found = self.outcomes.iter().filter_map(|o| o.witness.as_ref());
        let first = found.clone().next();
        found.find(|w| w.is_valid()).or(first)
    }

    pub fn admissible_mus(&self) -> Vec<i64> {
        self.outcomes.iter().map(|o| o.mu).collect()
    }
}

/// Knobs of the witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// `None` uses the equation's default threshold.
    pub x_threshold: Option<BigInt>,
    /// Constrained orbit points examined per seed when pushing `x` down.
    pub search_depth: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            x_threshold: None,
            search_depth: DEFAULT_SEARCH_DEPTH,
        }
    }
}

fn outcome_for_mu(
    query: &FamilyQuery,
    lattice: LatticeConfig,
    opts: &SearchOptions,
) -> Result<MuOutcome> {
    let mu = lattice.mu();
    let eq = query.equation(lattice);
    let threshold = opts
        .x_threshold
        .clone()
        .unwrap_or_else(|| eq.default_x_threshold());
    if eq.rhs().is_zero() {
        return Ok(MuOutcome {
            mu,
            status: MuStatus::DegenerateRhs,
            witness: None,
        });
    }
    let problem = eq.problem()?;
    let search = search_constrained(&problem)?;
    if search.is_empty() {
        return Ok(MuOutcome {
            mu,
            status: MuStatus::Empty(search.certificate),
            witness: None,
        });
    }

    // Seeds on the axis y = 0 are replaced by the next constrained point.
    let mut seeds: Vec<PellSolution> = Vec::new();
    for seed in &search.seeds {
        if !seed.solution.w.is_zero() {
            seeds.push(seed.solution.clone());
        } else if let Some(next) =
            ConstrainedOrbit::new(&problem, seed.solution.clone(), Direction::Forward)?
                .find(|s| !s.w.is_zero())
        {
            seeds.push(next);
        }
    }
    seeds.sort_by(PellSolution::canonical_cmp);
    seeds.dedup();

    let build = |sol: &PellSolution| {
        let (x, y) = eq.xy(sol).expect("constraints force divisibility");
        Witness::from_twist(*query, lattice, x, y, threshold.clone())
    };
    for seed in &seeds {
        if let Ok(pushed) = push_negative_within(seed, &eq, &threshold, opts.search_depth) {
            return Ok(MuOutcome {
                mu,
                status: MuStatus::Witness,
                witness: Some(build(&pushed)),
            });
        }
    }
    // Every admissible orbit has u + w sqrt(d) > 0, so x is bounded below.
    // Keep the point with least x so that callers can see how far off it is.
    let best = seeds
        .iter()
        .min_by(|a, b| a.u.cmp(&b.u).then_with(|| a.canonical_cmp(b)))
        .expect("nonempty search yields a seed");
    Ok(MuOutcome {
        mu,
        status: MuStatus::ThresholdUnreachable,
        witness: Some(build(best)),
    })
}

/// Runs the decision procedure for every admissible `mu`.
pub fn member_detailed(query: &FamilyQuery, d: i64, opts: &SearchOptions) -> Result<Membership> {
    query.validate()?;
    if d < 1 {
        return Err(Error::NonPositiveDiscriminant(d));
    }
    if is_square_i64(d) {
        return Err(Error::SquareDiscriminant(d));
    }
    let mus = admissible_mus(query.g, d);
    if mus.is_empty() {
        return Err(Error::NoValidMu {
            d,
            modulus: 4 * (query.g - 1),
        });
    }
    let outcomes = mus
        .into_iter()
        .map(|mu| outcome_for_mu(query, LatticeConfig::new(query.g, d, mu)?, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Membership {
        query: *query,
        d,
        outcomes,
    })
}

/// The witness for `d`, if `d` lies in the family.
pub fn member(query: &FamilyQuery, d: i64) -> Result<Option<Witness>> {
    Ok(member_detailed(query, d, &SearchOptions::default())?
        .witness()
        .cloned())
}

/// All non-square `d <= d_max` in the family, ascending, with witnesses.
pub fn enumerate(query: &FamilyQuery, d_max: i64) -> Result<Vec<Witness>> {
    enumerate_with(query, d_max, &SearchOptions::default())
}

pub fn enumerate_with(
    query: &FamilyQuery,
    d_max: i64,
    opts: &SearchOptions,
) -> Result<Vec<Witness>> {
    query.validate()?;
    let found: Vec<Witness> = (1..=d_max.max(0))
        .into_par_iter()
        .map(|d| match member_detailed(query, d, opts) {
            Ok(m) => Ok(m.witness().cloned()),
            Err(Error::SquareDiscriminant(_) | Error::NoValidMu { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    // into_par_iter on a range preserves order; the sort restates the contract
    let mut found = found;
    found.sort_by_key(Witness::d);
    Ok(found)
}

/// Independent scan of the closed formula
/// `d = ((a x + 2g-2)^2 - N) / (a y)^2` over `|x|, |y| <= xy_bound`.
pub fn enumerate_direct(query: &FamilyQuery, xy_bound: i64) -> BTreeSet<i64> {
    let (a, _) = query.ranks();
    let m = 2 * query.g - 2;
    let rhs = 4 * (query.g - 1) * (query.sign.value() * a - query.r * query.s + query.g - 1);
    let mut out = BTreeSet::new();
    for y in -xy_bound..=xy_bound {
        if y == 0 {
            continue;
        }
        let den = BigInt::from(a * y) * (a * y);
        for x in -xy_bound..=xy_bound {
            let u = BigInt::from(a * x + m);
            let num = &u * &u - rhs;
            let (d, rem) = num.div_rem(&den);
            if !rem.is_zero() || !d.is_positive() || is_square(&d) {
                continue;
            }
            let Ok(d) = i64::try_from(&d) else { continue };
            let fits = admissible_mus(query.g, d)
                .into_iter()
                .any(|mu| (x - mu * y).rem_euclid(m) == 0);
            if fits {
                out.insert(d);
            }
        }
    }
    out
}

/// The next `count` witnesses along the constrained orbit of `w`, walking
/// in the direction in which `x` decreases. Points with `y = 0` are skipped.
pub fn orbit_witnesses(w: &Witness, count: usize) -> Result<Vec<Witness>> {
    let eq = w.query.equation(w.lattice);
    let problem = eq.problem()?;
    let start = w.pell_solution();
    let unit = crate::pell::fundamental_unit(&problem.d)?;
    let fwd = crate::pell::orbit_step(&start, &unit, Direction::Forward);
    let bwd = crate::pell::orbit_step(&start, &unit, Direction::Backward);
    let direction = if fwd.u <= bwd.u {
        Direction::Forward
    } else {
        Direction::Backward
    };
    let out = ConstrainedOrbit::new(&problem, start, direction)?
        .filter(|s| !s.w.is_zero())
        .take(count)
        .map(|s| {
            let (x, y) = eq.xy(&s).expect("constraints force divisibility");
            Witness::from_twist(w.query, w.lattice, x, y, w.x_threshold.clone())
        })
        .collect();
    Ok(out)
}

/// Sufficient divisibility conditions for `D u tilde-D` to be infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Infinitude {
    pub infinite: bool,
    /// Every condition among `r|g-1`, `s|g-1`, `r|2`, `s|2` that holds.
    pub reasons: Vec<String>,
}

/// `infinite == false` means the criterion is inconclusive, not that the
/// family is finite.
pub fn infinitude(g: i64, r: i64, s: i64) -> Infinitude {
    let conditions = [
        ("r|g-1", r, g - 1),
        ("s|g-1", s, g - 1),
        ("r|2", r, 2),
        ("s|2", s, 2),
    ];
    let reasons: Vec<String> = conditions
        .iter()
        .filter(|(_, k, n)| *k != 0 && n % k == 0)
        .map(|(name, _, _)| name.to_string())
        .collect();
    Infinitude {
        infinite: !reasons.is_empty(),
        reasons,
    }
}
