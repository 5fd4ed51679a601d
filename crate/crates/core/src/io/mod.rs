//! Text formats: Newick forests, edge-list networks and JSON reduction traces.

mod network;
mod newick;
mod trace;

pub use network::{parse_network, parse_network_named, serialize_network, vertex_names};
pub use newick::{parse_forest, parse_forest_pair, parse_tree, serialize_forest, serialize_forest_pair};
pub use trace::{parse_trace, serialize_trace};

use thiserror::Error;

use crate::label::Label;

/// A parse failure. Lines and columns are 1-based.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: duplicate label {label}")]
    DuplicateLabel { line: usize, column: usize, label: Label },
    #[error("{line}:{column}: not binary: {message}")]
    NonBinary { line: usize, column: usize, message: String },
    #[error("{line}:{column}: vertex {vertex} has degree {degree}")]
    DegreeViolation { line: usize, column: usize, vertex: String, degree: usize },
    #[error("{line}:{column}: network is disconnected")]
    Disconnected { line: usize, column: usize },
    #[error("{line}:{column}: more than two edges between {u} and {v}")]
    TripleEdge { line: usize, column: usize, u: String, v: String },
    #[error("{line}:{column}: schema error: {message}")]
    Schema { line: usize, column: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::DuplicateLabel { line, column, .. }
            | ParseError::NonBinary { line, column, .. }
            | ParseError::DegreeViolation { line, column, .. }
            | ParseError::Disconnected { line, column }
            | ParseError::TripleEdge { line, column, .. }
            | ParseError::Schema { line, column, .. } => (*line, *column),
        }
    }
}

/// Drops a `#` comment and a trailing `\r`.
pub(crate) fn strip_comment(line: &str) -> &str {
    let line = line.strip_suffix('\r').unwrap_or(line);
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
