//! Text formats: model files, DIMACS CNF and polynomial systems.

mod dimacs;
mod model_file;
mod polysys;

use thiserror::Error;

pub use dimacs::{parse_dimacs, Cnf3};
pub use model_file::{parse_model, print_model, print_model_with_header};
pub use polysys::{parse_poly_system, PolySystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{0}")]
    Semantic(String),
    #[error("clause on line {line} has {len} literals; only clauses of at most 3 literals are supported")]
    NotThreeCnf { line: usize, len: usize },
    #[error("polynomial on line {line} has degree {degree}, above the bound {bound}")]
    DegreeExceeded {
        line: usize,
        degree: u64,
        bound: u64,
    },
}

pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Removes a `#` comment and returns the remaining text.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
