use std::fmt;

use serde::{Deserialize, Serialize};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FALSE: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const PRECONDITION: u8 = 3;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    #[serde(skip)]
    pub code: u8,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { kind: "input".into(), message: message.into(), code: exit::INPUT }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<toric_gauss::Error> for CliError {
    fn from(e: toric_gauss::Error) -> Self {
        use toric_gauss::Error::*;
        let (kind, code) = match &e {
            InvalidCharacteristic(_) | EmptyConfiguration | DimensionMismatch { .. } | DuplicatePoint { .. } => {
                ("input", exit::INPUT)
            }
            NotSurjective(_) | NotFiniteIndex(_) | QuotientHasTorsion | RankZeroLattice | NotExtendable(_) => {
                ("input", exit::INPUT)
            }
            BudgetExceeded(_) => ("budget", exit::INPUT),
            NotSpanning | PartialEnumeration | NotSeparable | RequiresCharacteristicZero(_)
            | RequiresPositiveCharacteristic | Hypothesis(_) => ("precondition", exit::PRECONDITION),
            Invariant(_) => ("self-check", exit::FALSE),
        };
        CliError { kind: kind.into(), message: e.to_string(), code }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
