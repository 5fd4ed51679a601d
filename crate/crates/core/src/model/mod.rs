//! Trees, forests and the elementary operations on them: restriction,
//! leaf and edge deletion, cherries, pendant shapes and canonical keys.

mod cherry;
mod forest;
mod tree;

pub use cherry::{classify, CherryCase, PendantShape};
pub use forest::{EdgeRef, Forest};
pub use tree::PhyloTree;

use thiserror::Error;

use crate::label::Label;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("restriction to the empty set")]
    EmptyRestriction,
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("invalid edge reference: {0}")]
    InvalidEdgeRef(String),
    #[error("({0}, {1}) is not a cherry")]
    NotACherry(Label, Label),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}
