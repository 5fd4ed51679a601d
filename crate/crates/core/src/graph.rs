//! Labeled multigraph storage shared by trees and networks.
//!
//! [`LabeledGraph`] is the compact immutable form. [`GraphEdit`] is a scratch
//! copy with tombstoned vertices used while deleting edges, pruning leaves and
//! suppressing degree-two vertices.

use std::collections::VecDeque;

use crate::label::Label;

/// Compact labeled multigraph. Parallel edges appear as repeated entries in
/// the adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    pub(crate) adj: Vec<Vec<usize>>,
    pub(crate) labels: Vec<Option<Label>>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn label(&self, v: usize) -> Option<&Label> {
        self.labels[v].as_ref()
    }

    pub fn is_labeled(&self, v: usize) -> bool {
        self.labels[v].is_some()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj[u].iter().filter(|&&w| w == v).count()
    }

    pub fn vertex_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l.as_ref() == Some(label))
    }

    /// Labels in ascending order.
    pub fn leaf_labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self.labels.iter().flatten().cloned().collect();
        out.sort();
        out
    }

    /// Every edge once, as `(min, max)`, repeated for parallel edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, ns) in self.adj.iter().enumerate() {
            for &v in ns {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.adj.len()
    }

    /// |E| - |V| + 1, the cyclomatic number of a connected graph.
    pub fn cyclomatic_number(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64 + 1
    }

    /// Vertices reachable from `start` without traversing the edge
    /// `{start, blocked}` (one occurrence).
    pub(crate) fn side_of(&self, start: usize, blocked: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        seen[start] = true;
        seen[blocked] = true;
        let mut out = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    stack.push(w);
                }
            }
        }
        out
    }

    /// Path between two vertices of a tree, inclusive of both ends.
    pub(crate) fn tree_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

impl LabeledGraph {
    /// True if some bijection of vertices keeps labels and edge
    /// multiplicities. Backtracking, intended for small graphs.
    pub fn isomorphic_to(&self, other: &LabeledGraph) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut deg_a: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut deg_b: Vec<usize> = (0..n).map(|v| other.degree(v)).collect();
        deg_a.sort_unstable();
        deg_b.sort_unstable();
        if deg_a != deg_b || self.leaf_labels() != other.leaf_labels() {
            return false;
        }
        // Labeled vertices first, then breadth-first so that each vertex
        // has a mapped neighbor when reached.
        let mut order: Vec<usize> = (0..n).filter(|&v| self.is_labeled(v)).collect();
        let mut placed = vec![false; n];
        for &v in &order {
            placed[v] = true;
        }
        let mut queue: VecDeque<usize> = order.iter().copied().collect();
        loop {
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !placed[w] {
                        placed[w] = true;
                        order.push(w);
                        queue.push_back(w);
                    }
                }
            }
            match (0..n).find(|&v| !placed[v]) {
                Some(v) => {
                    placed[v] = true;
                    order.push(v);
                    queue.push_back(v);
                }
                None => break,
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_iso(other, &order, 0, &mut map, &mut used)
    }

    fn extend_iso(
        &self,
        other: &LabeledGraph,
        order: &[usize],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&v) = order.get(i) else {
            return true;
        };
        let candidates: Vec<usize> = match self.label(v) {
            Some(l) => other.vertex_of(l).into_iter().collect(),
            None => (0..other.vertex_count()).filter(|&w| !other.is_labeled(w)).collect(),
        };
        for w in candidates {
            if used[w] || other.degree(w) != self.degree(v) {
                continue;
            }
            let consistent = self.adj[v].iter().all(|&a| {
                map[a] == usize::MAX || self.multiplicity(v, a) == other.multiplicity(w, map[a])
            });
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend_iso(other, order, i + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }
}

/// Mutable scratch graph with stable vertex ids.
#[derive(Clone, Debug)]
pub(crate) struct GraphEdit {
    pub adj: Vec<Vec<usize>>,
    pub labels: Vec<Option<Label>>,
    pub alive: Vec<bool>,
}

impl GraphEdit {
    pub fn new() -> Self {
        GraphEdit {
            adj: Vec::new(),
            labels: Vec::new(),
            alive: Vec::new(),
        }
    }

    pub fn from_graph(g: &LabeledGraph) -> Self {
        GraphEdit {
            adj: g.adj.clone(),
            labels: g.labels.clone(),
            alive: vec![true; g.adj.len()],
        }
    }

    pub fn add_vertex(&mut self, label: Option<Label>) -> usize {
        self.adj.push(Vec::new());
        self.labels.push(label);
        self.alive.push(true);
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    /// Removes one occurrence of `{u, v}`. Returns false if absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let Some(i) = self.adj[u].iter().position(|&w| w == v) else {
            return false;
        };
        self.adj[u].swap_remove(i);
        let j = self.adj[v]
            .iter()
            .position(|&w| w == u)
            .expect("adjacency lists out of sync");
        self.adj[v].swap_remove(j);
        true
    }

    pub fn remove_vertex(&mut self, v: usize) {
        for w in std::mem::take(&mut self.adj[v]) {
            if let Some(j) = self.adj[w].iter().position(|&x| x == v) {
                self.adj[w].swap_remove(j);
            }
        }
        self.alive[v] = false;
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj[u].iter().filter(|&&w| w == v).count()
    }

    pub fn vertex_of(&self, label: &Label) -> Option<usize> {
        (0..self.adj.len()).find(|&v| self.alive[v] && self.labels[v].as_ref() == Some(label))
    }

    /// Suppresses an unlabeled degree-two vertex whose two edges lead to
    /// distinct neighbors. Returns the new edge's endpoints on success.
    pub fn suppress(&mut self, v: usize) -> Option<(usize, usize)> {
        if !self.alive[v] || self.labels[v].is_some() || self.adj[v].len() != 2 {
            return None;
        }
        let (a, b) = (self.adj[v][0], self.adj[v][1]);
        if a == b {
            return None;
        }
        self.remove_vertex(v);
        self.add_edge(a, b);
        Some((a, b))
    }

    /// Splits edge `{a, b}` with a fresh unlabeled vertex.
    pub fn subdivide(&mut self, a: usize, b: usize) -> Option<usize> {
        if !self.remove_edge(a, b) {
            return None;
        }
        let s = self.add_vertex(None);
        self.add_edge(a, s);
        self.add_edge(s, b);
        Some(s)
    }

    /// Suppresses every suppressible degree-two vertex, to a fixpoint.
    pub fn suppress_all(&mut self) {
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..self.adj.len() {
                if self.suppress(v).is_some() {
                    changed = true;
                }
            }
        }
    }

    /// Connected components of the live vertices, each compacted. Vertex
    /// order inside a component follows ascending scratch id.
    pub fn components(&self) -> Vec<LabeledGraph> {
        let n = self.adj.len();
        let mut comp = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if !self.alive[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            groups.push(members);
        }
        groups.iter().map(|m| self.compact(m)).collect()
    }

    /// All live vertices as one graph (connectivity not checked), plus the
    /// map from scratch id to compact id.
    pub fn to_graph(&self) -> (LabeledGraph, Vec<usize>) {
        let members: Vec<usize> = (0..self.adj.len()).filter(|&v| self.alive[v]).collect();
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        (self.compact(&members), index)
    }

    fn compact(&self, members: &[usize]) -> LabeledGraph {
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let adj = members
            .iter()
            .map(|&v| self.adj[v].iter().map(|&w| index[w]).collect())
            .collect();
        let labels = members.iter().map(|&v| self.labels[v].clone()).collect();
        LabeledGraph { adj, labels }
    }
}
