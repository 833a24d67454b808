use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// 1-based line/column location inside substitution source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{pos}: unknown letter `{letter}` (no rule defines it)")]
    UnknownLetter { pos: Position, letter: String },
    #[error("{pos}: empty image for letter `{letter}`")]
    EmptyImage { pos: Position, letter: String },
    #[error("{pos}: duplicate rule for letter `{letter}`")]
    DuplicateRule { pos: Position, letter: String },
    #[error("alphabet has {size} letter(s), at least 2 are required")]
    AlphabetTooSmall { size: usize },
}

impl ParseError {
    pub fn position(&self) -> Option<Position> {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownLetter { pos, .. }
            | ParseError::EmptyImage { pos, .. }
            | ParseError::DuplicateRule { pos, .. } => Some(*pos),
            ParseError::AlphabetTooSmall { .. } => None,
        }
    }

    /// Shifts the reported line, used when a block is cut out of a larger file.
    pub(crate) fn offset_lines(self, by: usize) -> Self {
        let shift = |pos: Position| Position {
            line: pos.line + by,
            column: pos.column,
        };
        match self {
            ParseError::Syntax { pos, message } => ParseError::Syntax {
                pos: shift(pos),
                message,
            },
            ParseError::UnknownLetter { pos, letter } => ParseError::UnknownLetter {
                pos: shift(pos),
                letter,
            },
            ParseError::EmptyImage { pos, letter } => ParseError::EmptyImage {
                pos: shift(pos),
                letter,
            },
            ParseError::DuplicateRule { pos, letter } => ParseError::DuplicateRule {
                pos: shift(pos),
                letter,
            },
            other => other,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error(
        "substitution is not primitive (no positive power of the transition matrix up to {bound})"
    )]
    NotPrimitive { bound: usize },
    #[error(
        "substitution is periodic: factor complexity p({witness}) = {complexity} <= {witness}"
    )]
    Periodic { witness: usize, complexity: usize },
    #[error("vectors do not extend to a basis of Z^{dim}: elementary divisor {divisor}")]
    NotPrimitiveSystem { dim: usize, divisor: BigInt },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("conjugated matrix is not block triangular: entry ({row}, {col}) is {value}")]
    BlockFormViolation {
        row: usize,
        col: usize,
        value: BigInt,
    },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invariant tuples differ in {field}: `{left}` vs `{right}`")]
    InvarianceViolation {
        field: &'static str,
        left: String,
        right: String,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Short machine-readable tag, used in batch reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Parse(_) | Error::InvalidSubstitution(_) => "parse",
            Error::NotPrimitive { .. } => "not-primitive",
            Error::Periodic { .. } => "periodic",
            Error::InvalidBasis(_) => "invalid-basis",
            Error::InvarianceViolation { .. } => "invariance-violation",
            Error::NotPrimitiveSystem { .. }
            | Error::NotUnimodular
            | Error::BlockFormViolation { .. }
            | Error::NoConvergence { .. }
            | Error::Invariant(_) => "internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
