// Determinants d <= 180 for which (2, H, 2) on a genus 5 surface twists to
// (2, F, +-1).

use std::collections::BTreeSet;
use std::error::Error;

use k3w::{enumerate, enumerate_direct, infinitude, FamilyQuery, Sign};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut all = BTreeSet::new();
    for sign in Sign::BOTH {
        let query = FamilyQuery::new(5, 2, 2, sign, false);
        let witnesses = enumerate(&query, 180)?;
        let ds: Vec<i64> = witnesses.iter().map(|w| w.d()).collect();
        println!("{query}: {ds:?}");
        assert!(witnesses.iter().all(|w| w.is_valid()));
        all.extend(ds);

        let direct = enumerate_direct(&query, 60);
        let small: BTreeSet<i64> = direct.into_iter().filter(|&d| d <= 180).collect();
        assert!(small.iter().all(|d| witnesses.iter().any(|w| w.d() == *d)));
    }
    println!("union: {all:?}");
    for d in [17, 33, 41, 57, 73, 89, 113, 129, 161, 177] {
        assert!(all.contains(&d));
    }
    let inf = infinitude(5, 2, 2);
    println!("infinite: {} because {:?}", inf.infinite, inf.reasons);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
