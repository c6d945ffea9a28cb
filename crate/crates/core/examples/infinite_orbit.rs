// One solution of the type equation gives infinitely many witnesses: the
// unit group moves D.H as far down as wanted.

use std::error::Error;

use k3w::{member, orbit_witnesses, FamilyQuery, Sign};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let query = FamilyQuery::new(5, 2, 2, Sign::Plus, false);
    let first = member(&query, 17)?.ok_or("17 should be a member")?;
    println!("d = 17: D = ({}, {})", first.x, first.y);
    let more = orbit_witnesses(&first, 6)?;
    let mut last = first.x.clone();
    for w in &more {
        assert!(w.is_valid() && w.x < last);
        last = w.x.clone();
        println!("  D.H = {:>30}  F^2 = {}", w.x, w.report.f_square.computed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
