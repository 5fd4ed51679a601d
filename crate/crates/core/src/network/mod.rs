//! Pseudo-networks, phylogenetic networks, blobs, and the reductions that
//! lower the reticulation number while keeping displayed forests displayed.

mod blob;
mod reduce;

pub use blob::{blobs, Blob};
pub use reduce::{
    attachment_neighbors, remove_blob_edge, remove_network_leaf, remove_pendant_blob, simplify,
    SimplificationResult,
};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::LabeledGraph;
use crate::label::Label;
use crate::model::{Forest, PhyloTree};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error("graph is empty")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("more than two parallel edges between {0} and {1}")]
    TripleEdge(usize, usize),
    #[error("vertex {vertex} has degree {degree}")]
    DegreeViolation { vertex: usize, degree: usize },
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("network contains a multi-edge")]
    NotSimple,
    #[error("unknown label {0}")]
    UnknownLabel(Label),
    #[error("network has too few leaves")]
    TooSmall,
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("edge {{{0}, {1}}} is not in a blob")]
    NotABlobEdge(usize, usize),
    #[error("blob is not a pendant blob")]
    NotPendantBlob,
    #[error("pendant blob has {0} leaves, at most one allowed")]
    TooManyLeaves(usize),
    #[error("pendant blob has {0} leaves, at least two required")]
    TooFewLeaves(usize),
}

/// Connected multigraph with at most double edges, no loops, unlabeled
/// vertices of degree three and labeled leaves of degree at most one.
#[derive(Clone, PartialEq, Eq)]
pub struct PseudoNetwork {
    pub(crate) g: LabeledGraph,
}

/// A [`PseudoNetwork`] without multi-edges.
#[derive(Clone, PartialEq, Eq)]
pub struct PhyloNetwork(PseudoNetwork);

impl PseudoNetwork {
    pub fn from_graph(g: LabeledGraph) -> Result<PseudoNetwork, NetworkError> {
        validate(&g)?;
        Ok(PseudoNetwork { g })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.g
    }

    pub fn vertex_count(&self) -> usize {
        self.g.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.g.edge_count()
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.g.labels.iter().flatten().cloned().collect()
    }

    pub fn vertex_of(&self, x: &Label) -> Option<usize> {
        self.g.vertex_of(x)
    }

    /// `r(N) = |E| - |V| + 1`.
    pub fn reticulation_number(&self) -> usize {
        self.g.cyclomatic_number() as usize
    }

    /// Vertex pairs joined by two edges.
    pub fn multi_edges(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        let all = self.g.edges();
        for w in all.windows(2) {
            if w[0] == w[1] {
                pairs.push(w[0]);
            }
        }
        pairs.dedup();
        pairs
    }

    pub fn is_simple(&self) -> bool {
        self.multi_edges().is_empty()
    }

    pub fn into_phylo(self) -> Result<PhyloNetwork, NetworkError> {
        if self.is_simple() {
            Ok(PhyloNetwork(self))
        } else {
            Err(NetworkError::NotSimple)
        }
    }

    /// True if the network is isomorphic to `other` by a map fixing labels.
    pub fn isomorphic_to(&self, other: &PseudoNetwork) -> bool {
        self.g.isomorphic_to(&other.g)
    }
}

impl PhyloNetwork {
    pub fn from_graph(g: LabeledGraph) -> Result<PhyloNetwork, NetworkError> {
        PseudoNetwork::from_graph(g)?.into_phylo()
    }

    pub fn from_tree(t: &PhyloTree) -> PhyloNetwork {
        PhyloNetwork(PseudoNetwork { g: t.graph().clone() })
    }

    pub fn as_pseudo(&self) -> &PseudoNetwork {
        &self.0
    }

    pub fn into_pseudo(self) -> PseudoNetwork {
        self.0
    }
}

impl std::ops::Deref for PhyloNetwork {
    type Target = PseudoNetwork;
    fn deref(&self) -> &PseudoNetwork {
        &self.0
    }
}

/// `r(G)` for a connected graph; errors on a disconnected one.
pub fn reticulation_number(g: &LabeledGraph) -> Result<usize, NetworkError> {
    if g.vertex_count() == 0 {
        return Err(NetworkError::Empty);
    }
    if !g.is_connected() {
        return Err(NetworkError::Disconnected);
    }
    Ok(g.cyclomatic_number() as usize)
}

/// Reticulation number of every component of a forest (always zero).
pub fn forest_reticulation_numbers(f: &Forest) -> Vec<usize> {
    f.trees()
        .iter()
        .map(|t| reticulation_number(t.graph()).expect("trees are connected"))
        .collect()
}

fn validate(g: &LabeledGraph) -> Result<(), NetworkError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(NetworkError::Empty);
    }
    let mut seen = BTreeSet::new();
    for v in 0..n {
        for &w in g.neighbors(v) {
            if w == v {
                return Err(NetworkError::Loop(v));
            }
            if v < w && g.multiplicity(v, w) > 2 {
                return Err(NetworkError::TripleEdge(v, w));
            }
        }
        let d = g.degree(v);
        match g.label(v) {
            Some(l) => {
                if d > 1 {
                    return Err(NetworkError::DegreeViolation { vertex: v, degree: d });
                }
                if !seen.insert(l.clone()) {
                    return Err(NetworkError::DuplicateLabel(l.clone()));
                }
            }
            None => {
                if d != 3 {
                    return Err(NetworkError::DegreeViolation { vertex: v, degree: d });
                }
            }
        }
    }
    if !g.is_connected() {
        return Err(NetworkError::Disconnected);
    }
    Ok(())
}

impl fmt::Debug for PseudoNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::serialize_network(self).replace('\n', "; "))
    }
}

impl fmt::Debug for PhyloNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
