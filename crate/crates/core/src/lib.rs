//! Exact hybrid numbers and TBR distances of unrooted binary phylogenetic
//! forests via cherry picking sequences, with network reconstruction.
//!
//! ```
//! use cherrypick::io::parse_forest;
//! use cherrypick::{build_network, min_weight_cps, SearchOptions};
//!
//! let a = parse_forest("((1,2),(3,4));")?;
//! let b = parse_forest("((1,3),(2,4));")?;
//! let result = min_weight_cps(&a, &b, &SearchOptions::default())?;
//! assert_eq!(result.min_weight(), Some(1));
//! let network = build_network(&a, &b, result.witness())?;
//! assert_eq!(network.reticulation_number(), 1);
//! # Ok::<(), cherrypick::Error>(())
//! ```

pub mod builder;
pub mod cps;
pub mod gen;
pub mod graph;
pub mod io;
pub mod label;
pub mod model;
pub mod network;
pub mod oracles;
pub mod search;

pub use builder::{build_network, BuildError};
pub use cps::{CpsError, ReductionStep, ReductionTrace, Rule};
pub use io::ParseError;
pub use label::Label;
pub use model::{Forest, ModelError, PhyloTree};
pub use network::{NetworkError, PhyloNetwork, PseudoNetwork};
pub use oracles::OracleError;
pub use search::{hybrid_number, min_weight_cps, tbr_distance, SearchOptions, SearchOutcome, SearchResult};

use thiserror::Error;

/// Any error the library reports.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cps(#[from] CpsError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[cfg(test)]
pub(crate) mod testutil;
