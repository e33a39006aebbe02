//! Crate-wide error type.

use crate::exactmath::Integer;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Raised when a cleared rational prefactor fails to divide exactly.
    /// Never expected on valid inputs; it doubles as a detector for
    /// transcription bugs in the closed formulas.
    #[error("exact division violated: {numerator} is not divisible by {divisor}")]
    DivisibilityViolation { numerator: Integer, divisor: Integer },

    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient past the truncation bound was requested. Reported
    /// loudly instead of returning zero so truncation bugs surface.
    #[error("coefficient ({i}, {j}) is beyond the series cap {cap}")]
    OutOfCap { i: usize, j: usize, cap: usize },

    #[error("series has a nonzero coefficient with {variable}-exponent 0; not divisible by {variable}")]
    NotDivisible { variable: char },

    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("path lengths differ: {left} vs {right}")]
    LengthMismatch { left: u32, right: u32 },

    #[error("invalid path description: {reason}")]
    PathParse { reason: String },

    /// Guard against accidental 4^n blowups in the brute-force enumerator.
    #[error("n = {n} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { n: u32, ceiling: u32 },

    #[error("oracle cache problem: {reason}")]
    Cache { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
