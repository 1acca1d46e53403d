//! Exact algebra of representation rings of finite groups: permutation
//! groups, cyclotomic numbers, characters with Mackey operations,
//! localizations, lifting of unit families and module algebra over
//! Euclidean cyclotomic rings.

pub mod arith;
pub mod characters;
pub mod cyclicring;
pub mod cyclotomic;
pub mod groups;
pub mod homalg;
pub mod lifting;
pub mod linalg;
pub mod localization;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("group order exceeds the cap of {0}")]
    OrderCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("subgroup containment violated")]
    Containment,
    #[error("{0} is not an EPPO group")]
    NotEppo(String),
    #[error("{0} does not divide {1}")]
    NotDivisor(usize, usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("{0} is not coprime to the level {1}")]
    NotCoprime(usize, usize),
    #[error("denominator is not a power of {0}")]
    BadDenominator(usize),
    #[error("subgroup is not cyclic")]
    NotCyclic,
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("element is not a unit for the profile: {0}")]
    NotUnit(String),
    #[error("undecided unit query: {0}")]
    Undecided(String),
    #[error("inexact division: {0}")]
    Inexact(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("multiplicative sets must be finitely generated")]
    NotFinitelyGenerated,
}
