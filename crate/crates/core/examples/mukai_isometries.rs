// Twisting by a divisor and the rank/Euler swap on Mukai vectors.

use std::error::Error;

use k3w::{make_lattice, mukai_square_target, MukaiVector};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let lattice = make_lattice(5, 17, 1)?;
    let v = MukaiVector::polarized(&lattice, 2, 2);
    println!("v = {v}, v^2 = {}", v.square());
    let target = mukai_square_target(5, 2, 2)?;
    println!(
        "expected v^2 = {}, moduli dimension {}",
        target.square, target.dimension
    );

    // D = (-7H + G)/8 is a witness for d = 17 in the minus family
    let d = lattice.divisor(-7, 1)?;
    let t = v.tensorize(&d)?;
    println!("T_D(v) = {t}");
    assert_eq!(t.square(), v.square());

    let w = MukaiVector::new(1, lattice.divisor(1, 1)?, -3);
    assert_eq!(t.pairing(&w.tensorize(&d)?)?, v.pairing(&w)?);
    println!("<v, w> = {} is preserved by T_D", v.pairing(&w)?);

    let r = v.reflect();
    println!("delta(v) = {r}, delta(delta(v)) = {}", r.reflect());
    assert_eq!(r.reflect(), v);
    println!("v primitive: {}", v.is_primitive());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
