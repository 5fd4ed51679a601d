//! Brute-force reference procedures used to cross-check the exact search
//! and the network builder on small inputs.
//!
//! Nothing here relies on cherry picking: TBR distances come from
//! breadth-first search over tree rearrangements, and display is decided by
//! searching for an explicit embedding.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphEdit, LabeledGraph};
use crate::label::Label;
use crate::model::{Forest, PhyloTree};
use crate::network::PseudoNetwork;

/// Largest network (in vertices) [`displays`] accepts.
pub const DISPLAY_VERTEX_LIMIT: usize = 40;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("trees have different label sets")]
    LabelMismatch,
    #[error("TBR moves need at least four leaves")]
    TooSmall,
    #[error("distance exceeds the cap of {0}")]
    CapExceeded(usize),
    #[error("network has {0} vertices, above the limit of {DISPLAY_VERTEX_LIMIT}")]
    ScaleGuard(usize),
    #[error("forest label {0} is not a network leaf")]
    UnknownLabel(Label),
}

/// One part of a tree after deleting an edge, as a place to reconnect.
enum Attach {
    Vertex(usize),
    Edge(usize, usize),
}

fn attach_points(t: &PhyloTree) -> Vec<Attach> {
    if t.is_singleton() {
        vec![Attach::Vertex(0)]
    } else {
        t.edges().into_iter().map(|(a, b)| Attach::Edge(a, b)).collect()
    }
}

/// Copies `g` into `e` and returns the offset of its vertex ids.
fn copy_into(e: &mut GraphEdit, g: &LabeledGraph) -> usize {
    let off = e.adj.len();
    for v in 0..g.vertex_count() {
        e.add_vertex(g.label(v).cloned());
    }
    for (a, b) in g.edges() {
        e.add_edge(a + off, b + off);
    }
    off
}

fn place(e: &mut GraphEdit, at: &Attach, off: usize) -> usize {
    match *at {
        Attach::Vertex(v) => v + off,
        Attach::Edge(a, b) => e.subdivide(a + off, b + off).expect("edge exists"),
    }
}

/// All trees one TBR move away from `t`, excluding `t`, sorted by
/// canonical form.
pub fn tbr_neighbors(t: &PhyloTree) -> Result<Vec<PhyloTree>, OracleError> {
    if t.leaf_count() < 4 {
        return Err(OracleError::TooSmall);
    }
    let own = t.canonical();
    let mut out: HashMap<String, PhyloTree> = HashMap::new();
    for (u, v) in t.edges() {
        let (a, b) = t.split_at(u, v).expect("tree edge");
        let pa = attach_points(&a);
        let pb = attach_points(&b);
        for x in &pa {
            for y in &pb {
                let mut e = GraphEdit::new();
                let oa = copy_into(&mut e, a.graph());
                let ob = copy_into(&mut e, b.graph());
                let sa = place(&mut e, x, oa);
                let sb = place(&mut e, y, ob);
                e.add_edge(sa, sb);
                let joined = PhyloTree::from_graph(e.to_graph().0).expect("reconnection is a tree");
                let key = joined.canonical();
                if key != own {
                    out.entry(key).or_insert(joined);
                }
            }
        }
    }
    let mut keys: Vec<String> = out.keys().cloned().collect();
    keys.sort();
    Ok(keys.into_iter().map(|k| out.remove(&k).unwrap()).collect())
}

/// TBR distance by bidirectional breadth-first search. Fails with
/// `CapExceeded` once every tree within `cap` of both ends is explored.
pub fn tbr_distance_bfs(t: &PhyloTree, t2: &PhyloTree, cap: usize) -> Result<usize, OracleError> {
    if t.label_set() != t2.label_set() {
        return Err(OracleError::LabelMismatch);
    }
    let (s, g) = (t.canonical(), t2.canonical());
    if s == g {
        return Ok(0);
    }
    // dist maps canonical form to distance from the side's root.
    let mut dist = [HashMap::from([(s, 0usize)]), HashMap::from([(g, 0usize)])];
    let mut frontier = [vec![t.clone()], vec![t2.clone()]];
    let mut depth = [0usize, 0usize];
    while depth[0] + depth[1] < cap {
        let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
        if frontier[side].is_empty() {
            break;
        }
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for tree in &frontier[side] {
            for n in tbr_neighbors(tree)? {
                let key = n.canonical();
                if dist[side].contains_key(&key) {
                    continue;
                }
                if let Some(&d) = dist[1 - side].get(&key) {
                    let total = depth[side] + 1 + d;
                    best = Some(best.map_or(total, |b: usize| b.min(total)));
                }
                dist[side].insert(key, depth[side] + 1);
                next.push(n);
            }
        }
        depth[side] += 1;
        if let Some(b) = best {
            return if b <= cap { Ok(b) } else { Err(OracleError::CapExceeded(cap)) };
        }
        frontier[side] = next;
    }
    Err(OracleError::CapExceeded(cap))
}

/// Number of distinct trees reachable from `t` by TBR moves, including `t`.
pub fn tbr_closure_size(t: &PhyloTree) -> usize {
    if t.leaf_count() < 4 {
        return 1;
    }
    let mut seen = HashSet::from([t.canonical()]);
    let mut stack = vec![t.clone()];
    while let Some(cur) = stack.pop() {
        for n in tbr_neighbors(&cur).expect("same leaf count") {
            if seen.insert(n.canonical()) {
                stack.push(n);
            }
        }
    }
    seen.len()
}

/// Image of one forest component: the network vertex of every tree vertex
/// and the network path of every tree edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentImage {
    pub vertex_map: Vec<(usize, usize)>,
    pub edge_paths: Vec<((usize, usize), Vec<usize>)>,
}

/// Vertex-disjoint images of all components, in forest order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingImage {
    pub components: Vec<ComponentImage>,
}

/// A tree edge and the network path it maps to.
type EdgePath = ((usize, usize), Vec<usize>);

struct Embedder<'a> {
    net: &'a LabeledGraph,
    forest: &'a Forest,
    used: Vec<bool>,
    /// Per component: network vertex of each tree vertex.
    phi: Vec<Vec<usize>>,
    paths: Vec<Vec<EdgePath>>,
    /// Per component: tree parent of each vertex in the rooted traversal.
    parent: Vec<Vec<usize>>,
    /// Network neighbor of each labeled network leaf.
    leaf_anchor: HashMap<Label, Option<usize>>,
}

const UNSET: usize = usize::MAX;

impl Embedder<'_> {
    /// Tries components from `ci` on, with pending tree edges `frontier`
    /// of component `ci`.
    fn run(&mut self, ci: usize, frontier: Vec<(usize, usize)>) -> bool {
        if !self.feasible() {
            return false;
        }
        if frontier.is_empty() {
            return self.start(ci + 1);
        }
        // Prefer edges into leaves, whose image endpoint is fixed.
        let tree = self.forest.trees()[ci].graph();
        let pick = frontier
            .iter()
            .position(|&(_, c)| tree.is_labeled(c))
            .unwrap_or(0);
        let mut rest = frontier.clone();
        let (p, c) = rest.remove(pick);
        let from = self.phi[ci][p];
        let target = tree.label(c).map(|l| self.net.vertex_of(l).unwrap());
        let mut path = vec![from];
        self.extend(ci, p, c, target, &mut path, &rest)
    }

    /// Grows the image path of tree edge `(p, c)` from its last vertex.
    fn extend(
        &mut self,
        ci: usize,
        p: usize,
        c: usize,
        target: Option<usize>,
        path: &mut Vec<usize>,
        rest: &[(usize, usize)],
    ) -> bool {
        let last = *path.last().unwrap();
        let mut nbrs: Vec<usize> = self.net.neighbors(last).to_vec();
        nbrs.sort_unstable();
        nbrs.dedup();
        for w in nbrs {
            if self.used[w] {
                continue;
            }
            if let Some(t) = target {
                if w == t {
                    path.push(w);
                    self.used[w] = true;
                    self.phi[ci][c] = w;
                    self.paths[ci].push(((p, c), path.clone()));
                    if self.run(ci, rest.to_vec()) {
                        return true;
                    }
                    self.paths[ci].pop();
                    self.phi[ci][c] = UNSET;
                    self.used[w] = false;
                    path.pop();
                    continue;
                }
            }
            if self.net.is_labeled(w) {
                continue;
            }
            path.push(w);
            self.used[w] = true;
            if target.is_none() {
                // End the path here with `c` mapped to `w`.
                self.phi[ci][c] = w;
                self.paths[ci].push(((p, c), path.clone()));
                let tree = self.forest.trees()[ci].graph();
                let mut next = rest.to_vec();
                next.extend(tree.neighbors(c).iter().filter(|&&d| d != p).map(|&d| (c, d)));
                if self.run(ci, next) {
                    return true;
                }
                self.paths[ci].pop();
                self.phi[ci][c] = UNSET;
            }
            if self.extend(ci, p, c, target, path, rest) {
                return true;
            }
            self.used[w] = false;
            path.pop();
        }
        false
    }

    /// Starts component `ci` at its smallest leaf.
    fn start(&mut self, ci: usize) -> bool {
        let Some(t) = self.forest.trees().get(ci) else {
            return true;
        };
        let g = t.graph();
        let root = t.vertex_of(&t.labels()[0]).unwrap();
        let nv = self.net.vertex_of(g.label(root).unwrap()).unwrap();
        if self.used[nv] {
            return false;
        }
        self.used[nv] = true;
        self.phi[ci][root] = nv;
        let frontier = g.neighbors(root).iter().map(|&c| (root, c)).collect();
        if self.run(ci, frontier) {
            return true;
        }
        self.phi[ci][root] = UNSET;
        self.used[nv] = false;
        false
    }

    /// Every unmapped forest leaf must still reach its network neighbor.
    fn feasible(&self) -> bool {
        for (ci, t) in self.forest.trees().iter().enumerate() {
            let g = t.graph();
            for v in 0..g.vertex_count() {
                let Some(l) = g.label(v) else { continue };
                if self.phi[ci][v] != UNSET {
                    continue;
                }
                let nv = self.net.vertex_of(l).unwrap();
                if self.used[nv] {
                    return false;
                }
                if g.degree(v) == 0 {
                    continue;
                }
                if let Some(a) = self.leaf_anchor[l] {
                    let parent = self.parent[ci][v];
                    let ok = !self.used[a] || (parent != UNSET && self.phi[ci][parent] == a);
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn rooted_parents(t: &PhyloTree) -> Vec<usize> {
    let g = t.graph();
    let mut parent = vec![UNSET; g.vertex_count()];
    let root = t.vertex_of(&t.labels()[0]).unwrap();
    let mut stack = vec![root];
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    parent
}

/// Decides whether `n` displays `f` and returns an embedding if it does.
pub fn displays(n: &PseudoNetwork, f: &Forest) -> Result<Option<EmbeddingImage>, OracleError> {
    let net = n.graph();
    if net.vertex_count() > DISPLAY_VERTEX_LIMIT {
        return Err(OracleError::ScaleGuard(net.vertex_count()));
    }
    for l in f.ground_set() {
        if net.vertex_of(&l).is_none() {
            return Err(OracleError::UnknownLabel(l));
        }
    }
    let leaf_anchor = net
        .leaf_labels()
        .into_iter()
        .map(|l| {
            let v = net.vertex_of(&l).unwrap();
            (l, net.neighbors(v).first().copied())
        })
        .collect();
    let mut e = Embedder {
        net,
        forest: f,
        used: vec![false; net.vertex_count()],
        phi: f.trees().iter().map(|t| vec![UNSET; t.graph().vertex_count()]).collect(),
        paths: vec![Vec::new(); f.len()],
        parent: f.trees().iter().map(rooted_parents).collect(),
        leaf_anchor,
    };
    if !e.start(0) {
        return Ok(None);
    }
    let components = e
        .phi
        .into_iter()
        .zip(e.paths)
        .map(|(phi, mut paths)| {
            paths.sort();
            ComponentImage {
                vertex_map: phi.into_iter().enumerate().collect(),
                edge_paths: paths,
            }
        })
        .collect();
    Ok(Some(EmbeddingImage { components }))
}

/// Independent check that `img` embeds `f` in `n`: leaves go to equally
/// labeled leaves, internal vertices to unlabeled ones, every tree edge to
/// a network path between its endpoint images, and no network vertex is
/// used twice.
pub fn verify_embedding(n: &PseudoNetwork, f: &Forest, img: &EmbeddingImage) -> bool {
    let net = n.graph();
    if img.components.len() != f.len() {
        return false;
    }
    let mut used: HashSet<usize> = HashSet::new();
    for (t, c) in f.trees().iter().zip(&img.components) {
        let g = t.graph();
        let phi: HashMap<usize, usize> = c.vertex_map.iter().copied().collect();
        if phi.len() != g.vertex_count() || c.vertex_map.len() != g.vertex_count() {
            return false;
        }
        for (&v, &w) in &phi {
            if v >= g.vertex_count() || w >= net.vertex_count() || !used.insert(w) {
                return false;
            }
            if g.label(v) != net.label(w) {
                return false;
            }
        }
        let tree_edges: BTreeSet<(usize, usize)> = g.edges().into_iter().collect();
        let image_edges: BTreeSet<(usize, usize)> = c
            .edge_paths
            .iter()
            .map(|&((a, b), _)| (a.min(b), a.max(b)))
            .collect();
        if tree_edges != image_edges || c.edge_paths.len() != tree_edges.len() {
            return false;
        }
        for ((a, b), path) in &c.edge_paths {
            if path.len() < 2 || path[0] != phi[a] || path[path.len() - 1] != phi[b] {
                return false;
            }
            if path.windows(2).any(|w| net.multiplicity(w[0], w[1]) == 0) {
                return false;
            }
            for &inner in &path[1..path.len() - 1] {
                if net.is_labeled(inner) || !used.insert(inner) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests;
