use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic must be 0 or prime (got {0})")]
    InvalidCharacteristic(u64),
    #[error("point configuration is empty")]
    EmptyConfiguration,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("duplicate point: entry {duplicate} repeats entry {first}")]
    DuplicatePoint { first: usize, duplicate: usize },
    #[error("not finite index: {0}")]
    NotFiniteIndex(String),
    #[error("quotient has torsion: the lattice is not saturated")]
    QuotientHasTorsion,
    #[error("cannot embed into a rank-0 lattice")]
    RankZeroLattice,
    #[error("vectors do not extend to a basis of the lattice: {0}")]
    NotExtendable(String),
    #[error("projection is not surjective onto Z^{0}")]
    NotSurjective(usize),
    #[error("configuration does not affinely span its ambient lattice")]
    NotSpanning,
    #[error("image requires full enumeration")]
    PartialEnumeration,
    #[error("Cayley decomposition requires separable Gauss map")]
    NotSeparable,
    #[error("operation requires characteristic 0 (got {0})")]
    RequiresCharacteristicZero(u64),
    #[error("operation requires positive characteristic")]
    RequiresPositiveCharacteristic,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("brute-force budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;
