// The class h = F + eps f on S[n] and its Beauville-Bogomolov values.

use std::error::Error;

use k3w::{bb_pair_with_h, bb_square, member, FamilyQuery, HilbertClass, Sign};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // n = g - rs = 2 here, so eps = 1 and f^2 = -2
    let query = FamilyQuery::new(6, 2, 2, Sign::Plus, false);
    let w = member(&query, 21)?.ok_or("21 should be a member")?;
    let f = w.lattice.divisor(w.f.0.clone(), w.f.1.clone())?;
    let h = HilbertClass::corollary(f, query.hilbert_length())?;
    println!(
        "g = 6, d = 21: F^2 = {}, q(h) = {}, b(h, H) = {}",
        h.f_part.square(),
        bb_square(&h),
        bb_pair_with_h(&h)
    );
    assert_eq!(bb_square(&h), 4.into());

    // isotropic case n = 1: eps = 0 and q(h) = F^2
    let iso = FamilyQuery::new(5, 2, 2, Sign::Minus, false);
    let w = member(&iso, 17)?.ok_or("17 should be a member")?;
    println!(
        "g = 5, d = 17, minus: q(h) = {}",
        w.report.bb_square.computed
    );
    assert!(w.report.bb_square.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
