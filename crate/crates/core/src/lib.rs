//! Arithmetic of Mukai vectors on rank-two K3 Picard lattices.
//!
//! Given lattice data `(g, d, mu)` and a Mukai vector `v = (r, H, s)`, the
//! crate decides whether a twist `T_D` brings `v` to `(r, H + rD, +-1)` by
//! solving a congruence-constrained Pell-type equation, builds the witness
//! divisors `D` and `F = H + rD`, and checks the resulting identities,
//! including the Beauville-Bogomolov values on `H^2(S[n])`.

mod arith;
pub mod cli;
pub mod error;
pub mod family;
pub mod hilbert;
pub mod lattice;
pub mod mukai;
pub mod pell;
pub mod report;
pub mod selfcheck;

pub use error::{Error, Result};
pub use family::{
    enumerate, enumerate_direct, enumerate_with, infinitude, member, member_detailed,
    orbit_witnesses, verify_witness, FamilyQuery, Membership, MuStatus, SearchOptions, Witness,
};
pub use hilbert::{bb_pair_with_h, bb_square, verify_bb_corollary, HilbertClass};
pub use lattice::{admissible_mus, make_lattice, Divisor, LatticeConfig};
pub use mukai::{mukai_square_target, MukaiSquare, MukaiVector, Sign};
pub use pell::{
    fundamental_unit, orbit_step, push_negative, solve_bounded, solve_constrained, Direction,
    FundamentalUnit, PellProblem, PellSolution, TypeEquation,
};
pub use report::{Check, Relation, VerificationReport};
