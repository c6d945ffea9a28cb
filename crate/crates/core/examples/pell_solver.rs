// Units, class representatives, orbits, and the congruence-constrained
// decision procedure.

use std::error::Error;

use k3w::pell::search_constrained;
use k3w::{
    fundamental_unit, make_lattice, orbit_step, solve_bounded, Direction, Sign, TypeEquation,
};
use num_bigint::BigInt;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = BigInt::from(17);
    let unit = fundamental_unit(&d)?;
    println!("fundamental unit of Z[sqrt 17]: ({}, {})", unit.u, unit.w);

    let n = BigInt::from(8);
    let reps = solve_bounded(&d, &n)?;
    println!("classes of u^2 - 17 w^2 = 8: {reps:?}");
    let mut cur = reps[0].clone();
    for _ in 0..3 {
        cur = orbit_step(&cur, &unit, Direction::Forward);
        println!(
            "  next in orbit: ({}, {}), norm {}",
            cur.u,
            cur.w,
            cur.norm(&d)
        );
    }

    // the type equation for g = 5, v = (2, H, 2), sign -
    let eq = TypeEquation::new(make_lattice(5, 17, 1)?, 2, 2, Sign::Minus);
    let search = search_constrained(&eq.problem()?)?;
    println!(
        "constrained search: residue period {} mod {}, {} seeds",
        search.certificate.period,
        search.certificate.modulus,
        search.seeds.len()
    );
    for seed in &search.seeds {
        if let Some((x, y)) = eq.xy(&seed.solution) {
            println!(
                "  seed (u, w) = ({}, {}) -> D = ({x}, {y})",
                seed.solution.u, seed.solution.w
            );
        }
    }

    // 3 is not a norm from Z[sqrt 5]
    let none = solve_bounded(&BigInt::from(5), &BigInt::from(3))?;
    println!("u^2 - 5 w^2 = 3 has {} classes", none.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
