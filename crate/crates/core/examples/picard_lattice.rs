// The lattice N(S) for g = 5, d = 17: Gram data, intersections, and a class
// of degree one.

use std::error::Error;

use k3w::make_lattice;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let lattice = make_lattice(5, 17, 1)?;
    println!("{lattice}");
    println!("Gram matrix of {{H, (mu H + G)/8}}: {:?}", lattice.gram());
    println!("determinant: {}", lattice.det_check());
    assert_eq!(lattice.det_check(), -17);

    let h = lattice.polarization();
    let d = lattice.divisor(1, 1)?;
    println!(
        "H^2 = {}, D = {d}, D^2 = {}, D.H = {}",
        h.square(),
        d.square(),
        d.dot_h()
    );
    assert_eq!(d.square(), (-2).into());

    let e = lattice.unit_degree_class();
    println!("{e} has degree {}", e.dot_h());

    // mu = 3 gives the same d but a different N(S) presentation
    println!("admissible mu for d = 41: {:?}", k3w::admissible_mus(5, 41));
    match lattice.divisor(2, 1) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("2 != 1 mod 8"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
