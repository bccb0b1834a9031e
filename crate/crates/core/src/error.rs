use std::fmt;

use thiserror::Error;

/// Location-carrying syntax error produced by the formula parser and the DSL loader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, line: usize, column: usize) -> Self {
        ParseError {
            message: message.into(),
            line,
            column,
        }
    }

    /// Builds an error from a byte offset into `text`.
    pub fn at_offset(message: impl Into<String>, text: &str, offset: usize) -> Self {
        let (line, column) = line_col(text, offset);
        ParseError::new(message, line, column)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid connective name `{0}`")]
    InvalidName(String),
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
    #[error("connective `{symbol}` has arity {expected} but is applied to {found} argument(s)")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("connective `{0}` declared twice")]
    DuplicateConnective(String),
    #[error("morphism does not map `{0}`")]
    Unmapped(String),
    #[error("`{symbol}` of arity {arity} is mapped to `{image}` which is not an arity-{arity} connective of the target")]
    BadImage {
        symbol: String,
        image: String,
        arity: usize,
    },
    #[error("assignment `{symbol} -> {formula}` must use exactly the variables x0..x{arity_minus_one}", arity_minus_one = *arity as isize - 1)]
    SliceViolation {
        symbol: String,
        formula: String,
        arity: usize,
    },
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid calculus: {0}")]
    InvalidCalculus(String),
    #[error("invalid Lindenbaum set: {0}")]
    InvalidDelta(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
