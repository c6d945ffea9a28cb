//! Randomized property suites runnable from the command line.
//!
//! Every suite draws from its own ChaCha stream derived from one seed, so a
//! run is reproducible and independent of suite order.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd_i64, is_square_i64};
use crate::family::{enumerate, enumerate_direct, verify_witness, FamilyQuery};
use crate::hilbert::{bb_square, HilbertClass};
use crate::lattice::{Divisor, LatticeConfig};
use crate::mukai::{MukaiVector, Sign};
use crate::pell::{fundamental_unit, orbit_step, solve_bounded, Direction};
use crate::report::{Document, QueryRecord};

pub const DEFAULT_SEED: u64 = 0x6b33_7769_746e_6573;
pub const DEFAULT_ITERATIONS: u32 = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    /// First few counterexamples, rendered.
    pub failures: Vec<String>,
    pub failed: usize,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: Vec::new(),
            failed: 0,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// A uniformly chosen valid lattice of genus `g` with `d <= d_max`.
/// `d_max` must be at least `(2g-2)^2`.
pub fn random_lattice<R: Rng>(rng: &mut R, g: i64, d_max: i64, non_square: bool) -> LatticeConfig {
    let m = 2 * g - 2;
    let units: Vec<i64> = (1..m).filter(|&mu| gcd_i64(mu, m) == 1).collect();
    loop {
        let mu = units[rng.gen_range(0..units.len())];
        let k_max = (d_max - mu * mu) / (2 * m);
        let d = mu * mu + 2 * m * rng.gen_range(0..=k_max);
        if non_square && is_square_i64(d) {
            continue;
        }
        return LatticeConfig::new(g, d, mu).expect("mu^2 + 2mk is admissible");
    }
}

/// A divisor with basis coordinates in `[-bound, bound]`.
pub fn random_divisor<R: Rng>(rng: &mut R, lattice: &LatticeConfig, bound: i64) -> Divisor {
    let y = rng.gen_range(-bound..=bound);
    let alpha = rng.gen_range(-bound..=bound);
    lattice
        .divisor(lattice.mu() * y + lattice.degree() * alpha, y)
        .expect("basis combination lies in the lattice")
}

pub fn random_mukai<R: Rng>(rng: &mut R, lattice: &LatticeConfig, bound: i64) -> MukaiVector {
    MukaiVector::new(
        rng.gen_range(-bound..=bound),
        random_divisor(rng, lattice, bound),
        rng.gen_range(-bound..=bound),
    )
}

fn stream(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ suite.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn lattice_suite(seed: u64, iterations: u32) -> SuiteReport {
    let mut rng = stream(seed, 1);
    let mut rep = SuiteReport::new("lattice");
    for _ in 0..iterations {
        let g = rng.gen_range(3..=15);
        let l = random_lattice(&mut rng, g, 5000, false);
        rep.record(l.det_check() == -l.discriminant(), || format!("det of {l}"));
        let a = random_divisor(&mut rng, &l, 200);
        let b = random_divisor(&mut rng, &l, 200);
        rep.record(a.square().is_even(), || format!("{a}^2 odd on {l}"));
        let ab = a.inner(&b).expect("same lattice");
        let ba = b.inner(&a).expect("same lattice");
        let sum = a.try_add(&b).expect("same lattice");
        // (a+b)^2 = a^2 + 2ab + b^2
        let polar = sum.square() == a.square() + &ab * 2 + b.square();
        rep.record(ab == ba && polar, || {
            format!("bilinearity of {a}, {b} on {l}")
        });
    }
    rep
}

fn isometry_suite(seed: u64, iterations: u32) -> SuiteReport {
    let mut rng = stream(seed, 2);
    let mut rep = SuiteReport::new("isometries");
    for _ in 0..iterations {
        let g = [3, 5, 8][rng.gen_range(0..3)];
        let l = random_lattice(&mut rng, g, 3000, false);
        let v = random_mukai(&mut rng, &l, 30);
        let w = random_mukai(&mut rng, &l, 30);
        let dd = random_divisor(&mut rng, &l, 30);
        let ee = random_divisor(&mut rng, &l, 30);
        let before = v.pairing(&w).expect("same lattice");
        let twisted = v
            .tensorize(&dd)
            .and_then(|tv| w.tensorize(&dd).and_then(|tw| tv.pairing(&tw)));
        rep.record(twisted.as_ref() == Ok(&before), || {
            format!("T_D pairing for {v}, {w}")
        });
        let reflected = v.reflect().pairing(&w.reflect()).expect("same lattice");
        rep.record(reflected == before, || {
            format!("reflection pairing for {v}, {w}")
        });
        let composed = v.tensorize(&ee).and_then(|x| x.tensorize(&dd));
        let direct = dd.try_add(&ee).and_then(|s| v.tensorize(&s));
        rep.record(composed == direct, || format!("T_D T_E = T_(D+E) for {v}"));
        rep.record(v.reflect().reflect() == v, || {
            format!("reflection involution on {v}")
        });
    }
    rep
}

fn pell_suite(seed: u64, iterations: u32) -> SuiteReport {
    let mut rng = stream(seed, 3);
    let mut rep = SuiteReport::new("pell");
    for _ in 0..iterations {
        let d = loop {
            let d = rng.gen_range(2..=400i64);
            if !is_square_i64(d) {
                break d;
            }
        };
        let n = loop {
            let n = rng.gen_range(-80..=80i64);
            if n != 0 {
                break n;
            }
        };
        let (db, nb) = (BigInt::from(d), BigInt::from(n));
        let unit = fundamental_unit(&db).expect("non-square");
        rep.record(
            unit.as_solution().norm(&db).is_one() && unit.w.is_positive(),
            || format!("unit for d={d}"),
        );
        let reps = solve_bounded(&db, &nb).expect("non-square");
        for sol in &reps {
            let fwd = orbit_step(sol, &unit, Direction::Forward);
            let back = orbit_step(&fwd, &unit, Direction::Backward);
            rep.record(
                sol.norm(&db) == nb && fwd.norm(&db) == nb && back == *sol,
                || format!("orbit of {sol:?} for d={d}, N={n}"),
            );
        }
        // every small solution is an orbit image of a representative
        let w_max = 40i64;
        for w in 0..=w_max {
            let t = nb.clone() + &db * w * w;
            if t.is_negative() {
                continue;
            }
            let u = t.sqrt();
            if &u * &u != t {
                continue;
            }
            let target = crate::pell::PellSolution::new(u.clone(), w);
            let reached = reps.iter().any(|r| {
                r.sign_images().iter().any(|img| {
                    let mut cur = img.clone();
                    (0..12).any(|_| {
                        let hit = cur == target;
                        cur = orbit_step(&cur, &unit, Direction::Forward);
                        hit
                    })
                })
            });
            rep.record(reached, || format!("({u}, {w}) unreached for d={d}, N={n}"));
        }
    }
    rep
}

fn family_suite(seed: u64, iterations: u32, inject_fault: bool) -> SuiteReport {
    let mut rng = stream(seed, 4);
    let mut rep = SuiteReport::new("family");
    // enumeration is the costly part; scale it down
    for _ in 0..iterations.div_ceil(20) {
        let query = loop {
            let g = rng.gen_range(3..=9i64);
            let r = rng.gen_range(1..=3i64);
            let s = rng.gen_range(1..=3i64);
            if g > r * s {
                let sign = Sign::BOTH[rng.gen_range(0..2)];
                break FamilyQuery::new(g, r, s, sign, rng.gen_bool(0.5));
            }
        };
        let witnesses = enumerate(&query, 150).expect("validated query");
        let found: BTreeSet<i64> = witnesses.iter().map(|w| w.d()).collect();
        let direct: BTreeSet<i64> = enumerate_direct(&query, 40)
            .into_iter()
            .filter(|&d| d <= 150)
            .collect();
        rep.record(direct.is_subset(&found), || {
            format!("{query}: direct {direct:?} not within {found:?}")
        });
        for w in &witnesses {
            let mut w = w.clone();
            if inject_fault {
                w.f.0 += w.lattice.degree();
            }
            let report = verify_witness(&w, &query);
            let core_ok = report
                .entries()
                .iter()
                .all(|(name, c)| c.passed || *name == "threshold");
            rep.record(core_ok, || {
                format!("{query} d={}: {:?}", w.d(), report.failures())
            });
        }
        let doc = Document::new(QueryRecord::from_query(&query), None, &witnesses);
        let round = Document::from_json(&doc.to_json()).map(|back| {
            back.witnesses.iter().zip(&witnesses).all(|(rec, w)| {
                rec.to_witness(&query, Some(w.x_threshold.clone()))
                    .is_ok_and(|again| again.report == w.report)
            })
        });
        rep.record(matches!(round, Ok(true)), || {
            format!("{query}: JSON round trip")
        });
    }
    rep
}

fn hilbert_suite(seed: u64, iterations: u32) -> SuiteReport {
    let mut rng = stream(seed, 5);
    let mut rep = SuiteReport::new("beauville-bogomolov");
    for _ in 0..iterations {
        let g = rng.gen_range(3..=12);
        let l = random_lattice(&mut rng, g, 3000, false);
        let n = rng.gen_range(1..=10);
        let f = random_divisor(&mut rng, &l, 50);
        let c = rng.gen_range(-5..=5);
        let k = BigInt::from(rng.gen_range(-6..=6));
        let h = HilbertClass::new(f.clone(), c, n).expect("n >= 1");
        let q = bb_square(&h);
        rep.record(bb_square(&h.scaled(&k)) == &k * &k * &q, || {
            format!("q not quadratic at {f} + {c}f, n={n}")
        });
        let plain = HilbertClass::new(f.clone(), 0, n).expect("n >= 1");
        rep.record(bb_square(&plain) == f.square() && q.is_even(), || {
            format!("q({f}) on {l}")
        });
    }
    rep
}

/// Runs every suite. `inject_fault` corrupts witnesses before they are
/// re-verified, so at least one suite must fail.
pub fn run_selfcheck(seed: u64, iterations: u32, inject_fault: bool) -> Vec<SuiteReport> {
    vec![
        lattice_suite(seed, iterations),
        isometry_suite(seed, iterations),
        pell_suite(seed, iterations),
        family_suite(seed, iterations, inject_fault),
        hilbert_suite(seed, iterations),
    ]
}
