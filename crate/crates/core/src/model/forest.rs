use std::collections::BTreeSet;
use std::fmt;

use crate::label::Label;
use crate::model::{ModelError, PhyloTree};

/// Set of phylogenetic trees with pairwise disjoint leaf sets.
#[derive(Clone)]
pub struct Forest {
    trees: Vec<PhyloTree>,
}

/// Selects one edge of one component of a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeRef {
    /// `e_x`, the pendant edge of leaf `x`.
    PendantOf(Label),
    /// `e_S`, the cut-edge whose removal leaves exactly these labels on one
    /// side. Covers `e_{(p,q)}`, `e_{((x,y),p)}` and friends.
    PendantSubtree(BTreeSet<Label>),
    /// Raw vertex ids inside component `tree`. Not stable across rebuilds.
    Explicit { tree: usize, u: usize, v: usize },
}

impl Forest {
    pub fn new(trees: Vec<PhyloTree>) -> Result<Forest, ModelError> {
        let mut seen = BTreeSet::new();
        for t in &trees {
            for l in t.labels() {
                if !seen.insert(l.clone()) {
                    return Err(ModelError::DuplicateLabel(l));
                }
            }
        }
        Ok(Forest { trees })
    }

    pub(crate) fn from_trees_unchecked(trees: Vec<PhyloTree>) -> Forest {
        Forest { trees }
    }

    pub fn from_tree(tree: PhyloTree) -> Forest {
        Forest { trees: vec![tree] }
    }

    pub fn trees(&self) -> &[PhyloTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn ground_set(&self) -> BTreeSet<Label> {
        self.trees.iter().flat_map(|t| t.labels()).collect()
    }

    pub fn label_count(&self) -> usize {
        self.trees.iter().map(PhyloTree::leaf_count).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.trees.iter().map(|t| t.graph().edge_count()).sum()
    }

    /// Index of the component containing `x`.
    pub fn component_of(&self, x: &Label) -> Option<usize> {
        self.trees.iter().position(|t| t.contains(x))
    }

    pub fn tree_of(&self, x: &Label) -> Option<&PhyloTree> {
        self.component_of(x).map(|i| &self.trees[i])
    }

    /// True if `x` is an isolated vertex of the forest.
    pub fn is_singleton(&self, x: &Label) -> bool {
        self.tree_of(x).is_some_and(PhyloTree::is_singleton)
    }

    pub fn has_cherry(&self, x: &Label, y: &Label) -> bool {
        self.tree_of(x).is_some_and(|t| t.has_cherry(x, y))
    }

    pub fn in_cherry(&self, x: &Label) -> bool {
        self.tree_of(x).is_some_and(|t| t.in_cherry(x))
    }

    pub fn same_tree(&self, x: &Label, y: &Label) -> bool {
        match (self.component_of(x), self.component_of(y)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// All cherries of all components, lexicographically ordered.
    pub fn cherries(&self) -> Vec<(Label, Label)> {
        let mut out: Vec<_> = self.trees.iter().flat_map(PhyloTree::cherries).collect();
        out.sort();
        out
    }

    /// `F - x`.
    pub fn remove_leaf(&self, x: &Label) -> Result<Forest, ModelError> {
        let i = self
            .component_of(x)
            .ok_or_else(|| ModelError::UnknownLabel(x.clone()))?;
        let mut trees = self.trees.clone();
        match trees[i].without_leaf(x)? {
            Some(t) => trees[i] = t,
            None => {
                trees.remove(i);
            }
        }
        Ok(Forest { trees })
    }

    /// Resolves an edge selector to `(component, u, v)`.
    pub fn resolve(&self, e: &EdgeRef) -> Result<(usize, usize, usize), ModelError> {
        match e {
            EdgeRef::PendantOf(x) => {
                let i = self
                    .component_of(x)
                    .ok_or_else(|| ModelError::UnknownLabel(x.clone()))?;
                let (v, u) = self.trees[i]
                    .pendant_edge(x)
                    .ok_or_else(|| ModelError::InvalidEdgeRef(format!("{x} is isolated")))?;
                Ok((i, v, u))
            }
            EdgeRef::PendantSubtree(side) => {
                let first = side
                    .iter()
                    .next()
                    .ok_or_else(|| ModelError::InvalidEdgeRef("empty leaf set".into()))?;
                let i = self
                    .component_of(first)
                    .ok_or_else(|| ModelError::UnknownLabel(first.clone()))?;
                let t = &self.trees[i];
                for (u, v) in t.edges() {
                    let s = t.side_labels(u, v);
                    if &s == side {
                        return Ok((i, v, u));
                    }
                    if &t.side_labels(v, u) == side {
                        return Ok((i, u, v));
                    }
                }
                Err(ModelError::InvalidEdgeRef(format!(
                    "no cut-edge isolates {side:?}"
                )))
            }
            EdgeRef::Explicit { tree, u, v } => {
                let t = self
                    .trees
                    .get(*tree)
                    .ok_or_else(|| ModelError::InvalidEdgeRef(format!("no component {tree}")))?;
                if *u < t.graph().vertex_count()
                    && *v < t.graph().vertex_count()
                    && t.graph().neighbors(*u).contains(v)
                {
                    Ok((*tree, *u, *v))
                } else {
                    Err(ModelError::InvalidEdgeRef(format!("no edge {{{u}, {v}}}")))
                }
            }
        }
    }

    /// `F - e`.
    pub fn remove_edge(&self, e: &EdgeRef) -> Result<Forest, ModelError> {
        let (i, u, v) = self.resolve(e)?;
        self.cut(i, u, v)
    }

    pub(crate) fn cut(&self, i: usize, u: usize, v: usize) -> Result<Forest, ModelError> {
        let (a, b) = self.trees[i].split_at(u, v)?;
        let mut trees = self.trees.clone();
        trees[i] = a;
        trees.insert(i + 1, b);
        Ok(Forest { trees })
    }

    /// Canonical text key: component canonical strings, sorted, one per line.
    pub fn canonical_form(&self) -> String {
        let mut parts: Vec<String> = self.trees.iter().map(PhyloTree::canonical).collect();
        parts.sort();
        let mut out = String::new();
        for p in parts {
            out.push_str(&p);
            out.push('\n');
        }
        out
    }

    /// `F|Y` componentwise, dropping components disjoint from `ys`.
    pub fn restrict(&self, ys: &BTreeSet<Label>) -> Result<Forest, ModelError> {
        let mut trees = Vec::new();
        for t in &self.trees {
            let keep: BTreeSet<Label> = t.label_set().intersection(ys).cloned().collect();
            if !keep.is_empty() {
                trees.push(t.restrict(&keep)?);
            }
        }
        Ok(Forest { trees })
    }
}

impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

impl Eq for Forest {}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.trees.iter().map(PhyloTree::canonical).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}
