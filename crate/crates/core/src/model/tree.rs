use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{GraphEdit, LabeledGraph};
use crate::label::Label;
use crate::model::ModelError;

/// Unrooted binary phylogenetic tree.
///
/// Labeled vertices have degree at most one, unlabeled vertices degree three.
/// A two-leaf tree is a single edge between its leaves and a one-leaf tree is
/// a lone labeled vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct PhyloTree {
    pub(crate) g: LabeledGraph,
}

impl PhyloTree {
    /// Validates the tree invariants on an arbitrary labeled graph.
    pub fn from_graph(g: LabeledGraph) -> Result<PhyloTree, ModelError> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(ModelError::InvalidTree("empty graph".into()));
        }
        if !g.is_connected() {
            return Err(ModelError::InvalidTree("not connected".into()));
        }
        if g.edge_count() != n - 1 {
            return Err(ModelError::InvalidTree("contains a cycle".into()));
        }
        let mut seen = BTreeSet::new();
        for v in 0..n {
            match g.label(v) {
                Some(l) => {
                    if g.degree(v) > 1 {
                        return Err(ModelError::InvalidTree(format!(
                            "labeled vertex {l} has degree {}",
                            g.degree(v)
                        )));
                    }
                    if !seen.insert(l.clone()) {
                        return Err(ModelError::DuplicateLabel(l.clone()));
                    }
                }
                None => {
                    if g.degree(v) != 3 {
                        return Err(ModelError::InvalidTree(format!(
                            "unlabeled vertex of degree {}",
                            g.degree(v)
                        )));
                    }
                }
            }
        }
        Ok(PhyloTree { g })
    }

    pub(crate) fn from_graph_unchecked(g: LabeledGraph) -> PhyloTree {
        debug_assert!(PhyloTree::from_graph(g.clone()).is_ok(), "invalid tree {g:?}");
        PhyloTree { g }
    }

    pub fn singleton(label: Label) -> PhyloTree {
        PhyloTree {
            g: LabeledGraph {
                adj: vec![vec![]],
                labels: vec![Some(label)],
            },
        }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.g
    }

    pub fn labels(&self) -> Vec<Label> {
        self.g.leaf_labels()
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.g.labels.iter().flatten().cloned().collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.g.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.g.vertex_of(label).is_some()
    }

    pub fn is_singleton(&self) -> bool {
        self.g.vertex_count() == 1
    }

    pub fn vertex_of(&self, label: &Label) -> Option<usize> {
        self.g.vertex_of(label)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.g.edges()
    }

    /// Labels on `u`'s side of the edge `{u, v}`.
    pub fn side_labels(&self, u: usize, v: usize) -> BTreeSet<Label> {
        self.g
            .side_of(u, v)
            .into_iter()
            .filter_map(|w| self.g.label(w).cloned())
            .collect()
    }

    /// `T|Y`: the minimal subtree spanning `ys`, degree-two vertices suppressed.
    pub fn restrict(&self, ys: &BTreeSet<Label>) -> Result<PhyloTree, ModelError> {
        if ys.is_empty() {
            return Err(ModelError::EmptyRestriction);
        }
        for y in ys {
            if !self.contains(y) {
                return Err(ModelError::UnknownLabel(y.clone()));
            }
        }
        let mut e = GraphEdit::from_graph(&self.g);
        for v in 0..e.adj.len() {
            if let Some(l) = &e.labels[v] {
                if !ys.contains(l) {
                    e.labels[v] = None;
                }
            }
        }
        // Prune unlabeled leaves until none remain.
        let mut stack: Vec<usize> = (0..e.adj.len())
            .filter(|&v| e.labels[v].is_none() && e.degree(v) <= 1)
            .collect();
        while let Some(v) = stack.pop() {
            if !e.alive[v] || e.labels[v].is_some() || e.degree(v) > 1 {
                continue;
            }
            let nbrs = e.adj[v].clone();
            e.remove_vertex(v);
            for w in nbrs {
                if e.labels[w].is_none() && e.degree(w) <= 1 {
                    stack.push(w);
                }
            }
        }
        e.suppress_all();
        let mut parts = e.components();
        debug_assert_eq!(parts.len(), 1);
        Ok(PhyloTree::from_graph_unchecked(parts.remove(0)))
    }

    /// `T - x`. Returns `None` when `T` is the single vertex `x`.
    pub fn without_leaf(&self, x: &Label) -> Result<Option<PhyloTree>, ModelError> {
        let v = self
            .vertex_of(x)
            .ok_or_else(|| ModelError::UnknownLabel(x.clone()))?;
        if self.is_singleton() {
            return Ok(None);
        }
        let mut e = GraphEdit::from_graph(&self.g);
        let u = e.adj[v][0];
        e.remove_vertex(v);
        e.suppress(u);
        let mut parts = e.components();
        Ok(Some(PhyloTree::from_graph_unchecked(parts.remove(0))))
    }

    /// `T - e` for the edge `{u, v}`; the first tree holds `u`'s side.
    pub fn split_at(&self, u: usize, v: usize) -> Result<(PhyloTree, PhyloTree), ModelError> {
        if u >= self.g.vertex_count() || v >= self.g.vertex_count() || !self.g.adj[u].contains(&v)
        {
            return Err(ModelError::InvalidEdgeRef(format!("no edge {{{u}, {v}}}")));
        }
        let mut e = GraphEdit::from_graph(&self.g);
        e.remove_edge(u, v);
        e.suppress(u);
        e.suppress(v);
        let parts = e.components();
        debug_assert_eq!(parts.len(), 2);
        let mut trees = parts.into_iter().map(PhyloTree::from_graph_unchecked);
        let a = trees.next().unwrap();
        let b = trees.next().unwrap();
        // Labels decide sides: u's side keeps a label reachable from u.
        let witness = self.side_labels(u, v).into_iter().next();
        match witness {
            Some(l) if b.contains(&l) => Ok((b, a)),
            _ => Ok((a, b)),
        }
    }

    /// Cherries in lexicographic order, each as `(min, max)`.
    pub fn cherries(&self) -> Vec<(Label, Label)> {
        let g = &self.g;
        let mut out = Vec::new();
        if g.vertex_count() == 2 {
            let (a, b) = (g.label(0).unwrap().clone(), g.label(1).unwrap().clone());
            out.push(if a < b { (a, b) } else { (b, a) });
            return out;
        }
        for v in 0..g.vertex_count() {
            if g.is_labeled(v) {
                continue;
            }
            let mut leaves: Vec<&Label> = g.adj[v].iter().filter_map(|&w| g.label(w)).collect();
            leaves.sort();
            for i in 0..leaves.len() {
                for j in i + 1..leaves.len() {
                    out.push((leaves[i].clone(), leaves[j].clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// True if `x` and `y` form a cherry of this tree.
    pub fn has_cherry(&self, x: &Label, y: &Label) -> bool {
        let (Some(vx), Some(vy)) = (self.vertex_of(x), self.vertex_of(y)) else {
            return false;
        };
        if vx == vy {
            return false;
        }
        if self.g.vertex_count() == 2 {
            return true;
        }
        let (ax, ay) = (&self.g.adj[vx], &self.g.adj[vy]);
        !ax.is_empty() && !ay.is_empty() && ax[0] == ay[0]
    }

    /// True if `x` belongs to some cherry of this tree.
    pub fn in_cherry(&self, x: &Label) -> bool {
        let Some(v) = self.vertex_of(x) else {
            return false;
        };
        match self.g.vertex_count() {
            1 => false,
            2 => true,
            _ => {
                let u = self.g.adj[v][0];
                self.g.adj[u].iter().any(|&w| w != v && self.g.is_labeled(w))
            }
        }
    }

    /// Labels `z` such that `(x, z)` is a cherry, ascending.
    pub fn cherry_partners(&self, x: &Label) -> Vec<Label> {
        let Some(v) = self.vertex_of(x) else {
            return Vec::new();
        };
        let g = &self.g;
        let mut out: Vec<Label> = match g.vertex_count() {
            1 => Vec::new(),
            2 => vec![g.label(1 - v).unwrap().clone()],
            _ => {
                let u = g.adj[v][0];
                g.adj[u]
                    .iter()
                    .filter(|&&w| w != v)
                    .filter_map(|&w| g.label(w).cloned())
                    .collect()
            }
        };
        out.sort();
        out
    }

    /// The edge incident with leaf `x`, as `(x's vertex, neighbor)`.
    pub fn pendant_edge(&self, x: &Label) -> Option<(usize, usize)> {
        let v = self.vertex_of(x)?;
        self.g.adj[v].first().map(|&u| (v, u))
    }

    /// Canonical Newick string. Equal for two trees iff they are isomorphic
    /// respecting labels.
    pub fn canonical(&self) -> String {
        let g = &self.g;
        match g.vertex_count() {
            1 => format!("{};", g.label(0).unwrap()),
            2 => {
                let (a, b) = (g.label(0).unwrap(), g.label(1).unwrap());
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                format!("({a},{b});")
            }
            _ => {
                let root = (0..g.vertex_count())
                    .filter(|&v| g.is_labeled(v))
                    .min_by(|&a, &b| g.label(a).cmp(&g.label(b)))
                    .unwrap();
                let c = g.adj[root][0];
                let mut parts: Vec<String> = g.adj[c]
                    .iter()
                    .filter(|&&w| w != root)
                    .map(|&w| canon_rooted(g, w, c))
                    .collect();
                parts.sort();
                format!("({},{},{});", g.label(root).unwrap(), parts[0], parts[1])
            }
        }
    }
}

fn canon_rooted(g: &LabeledGraph, v: usize, parent: usize) -> String {
    if let Some(l) = g.label(v) {
        return l.to_string();
    }
    let mut parts: Vec<String> = g.adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| canon_rooted(g, w, v))
        .collect();
    parts.sort();
    format!("({})", parts.join(","))
}

impl fmt::Debug for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl fmt::Display for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
