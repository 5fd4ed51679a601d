use std::collections::BTreeSet;

use crate::graph::LabeledGraph;
use crate::label::Label;
use crate::network::PseudoNetwork;

/// Maximal 2-connected subgraph that is not a single edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blob {
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// Edges as `(min, max)`, repeated for a double edge.
    pub edges: Vec<(usize, usize)>,
    /// Incident edges as `(inside, outside)`.
    pub incident: Vec<(usize, usize)>,
    /// `L(B)`: leaves at the far end of an incident edge.
    pub leaves: BTreeSet<Label>,
    /// At most one incident edge is a non-trivial cut-edge.
    pub pendant: bool,
}

impl Blob {
    pub fn reticulation_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Incident edges whose far end is not a leaf.
    pub fn nontrivial_cut_edges(&self) -> usize {
        self.incident.len() - self.leaves.len()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// `r(B) >= 2`, which holds for every pendant blob of a phylogenetic
    /// network with at most one incident leaf.
    pub fn has_reticulation_at_least_two(&self) -> bool {
        self.reticulation_number() >= 2
    }
}

/// Blobs of a pseudo-network, ordered by smallest vertex id.
pub fn blobs(n: &PseudoNetwork) -> Vec<Blob> {
    blobs_of(&n.g)
}

pub(crate) fn blobs_of(g: &LabeledGraph) -> Vec<Blob> {
    let edges = g.edges();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count()];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    let mut state = Tarjan {
        adj: &adj,
        disc: vec![usize::MAX; g.vertex_count()],
        low: vec![0; g.vertex_count()],
        time: 0,
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for s in 0..g.vertex_count() {
        if state.disc[s] == usize::MAX {
            state.visit(s, usize::MAX);
        }
    }
    let mut out: Vec<Blob> = state
        .comps
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|ids| {
            let mut bedges: Vec<(usize, usize)> = ids.iter().map(|&i| edges[i]).collect();
            bedges.sort_unstable();
            let mut vertices: Vec<usize> = bedges.iter().flat_map(|&(u, v)| [u, v]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let mut incident = Vec::new();
            let mut leaves = BTreeSet::new();
            for &v in &vertices {
                for &w in g.neighbors(v) {
                    if vertices.binary_search(&w).is_err() {
                        incident.push((v, w));
                        if g.degree(w) <= 1 {
                            if let Some(l) = g.label(w) {
                                leaves.insert(l.clone());
                            }
                        }
                    }
                }
            }
            incident.sort_unstable();
            let nontrivial = incident.len() - leaves.len();
            Blob {
                vertices,
                edges: bedges,
                incident,
                leaves,
                pendant: nontrivial <= 1,
            }
        })
        .collect();
    out.sort_by_key(|b| b.vertices[0]);
    out
}

struct Tarjan<'a> {
    adj: &'a [Vec<(usize, usize)>],
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, u: usize, parent_edge: usize) {
        self.disc[u] = self.time;
        self.low[u] = self.time;
        self.time += 1;
        let adj = self.adj;
        for &(v, id) in &adj[u] {
            if id == parent_edge {
                continue;
            }
            if self.disc[v] == usize::MAX {
                self.stack.push(id);
                self.visit(v, id);
                self.low[u] = self.low[u].min(self.low[v]);
                if self.low[v] >= self.disc[u] {
                    let mut comp = Vec::new();
                    while let Some(e) = self.stack.pop() {
                        comp.push(e);
                        if e == id {
                            break;
                        }
                    }
                    self.comps.push(comp);
                }
            } else if self.disc[v] < self.disc[u] {
                self.stack.push(id);
                self.low[u] = self.low[u].min(self.disc[v]);
            }
        }
    }
}
