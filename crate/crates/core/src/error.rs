use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 3, got {0}")]
    GenusTooSmall(i64),

    #[error("discriminant must be positive, got {0}")]
    NonPositiveDiscriminant(i64),

    #[error("mu = {mu} is not a unit modulo {modulus}")]
    NotAUnit { mu: i64, modulus: i64 },

    #[error("mu^2 = {mu_sq} is not congruent to d = {d} modulo {modulus}")]
    CongruenceFailure { mu_sq: i64, d: i64, modulus: i64 },

    #[error("square discriminant d = {0}")]
    SquareDiscriminant(i64),

    #[error("no valid mu: {d} is not the square of a unit modulo {modulus}")]
    NoValidMu { d: i64, modulus: i64 },

    #[error("({x}, {y}) does not satisfy x = mu*y (mod {modulus})")]
    NotInLattice { x: BigInt, y: BigInt, modulus: i64 },

    #[error("operands live on different Picard lattices")]
    MixedLattices,

    #[error("g = {g} < r*s = {rs}: the Mukai vector has no moduli interpretation")]
    NegativeDimension { g: i64, rs: i64 },

    #[error("square input d = {0} to the Pell engine")]
    SquareInput(BigInt),

    #[error("Pell right-hand side must be nonzero")]
    ZeroRightHandSide,

    #[error("orbit walk did not reach x <= {threshold} within {steps} steps")]
    ThresholdUnreachable { threshold: BigInt, steps: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),
}
