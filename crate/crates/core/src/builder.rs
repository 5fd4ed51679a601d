//! Rebuilds a phylogenetic network from a cherry picking trace by undoing
//! its steps from the last one backwards.
//!
//! Undoing a leaf removal attaches the leaf on a pendant edge (reticulation
//! number unchanged). Undoing an edge cut adds one edge between subdivision
//! points on the images of the two sides of the cut (reticulation number
//! plus one). For both forests the builder keeps an explicit image: the
//! network vertex of every forest vertex and the network path of every
//! forest edge. Images are checked after every step.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::cps::{check_step, replay, CpsError, ReductionTrace, Rule, Side, StepEffect};
use crate::graph::{GraphEdit, LabeledGraph};
use crate::label::Label;
use crate::model::{Forest, PhyloTree};
use crate::network::{NetworkError, PhyloNetwork};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid trace: {0}")]
    InvalidTrace(#[from] CpsError),
    /// An image required by an insertion is missing or malformed. This is
    /// an internal bug, never a user error.
    #[error("image tracking error: {0}")]
    ImageTracking(String),
    #[error("built graph is not a phylogenetic network: {0}")]
    Network(#[from] NetworkError),
}

/// Where a re-inserted leaf sits in one forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// The leaf is an isolated vertex.
    Isolated,
    /// The leaf and this leaf form a two-leaf component.
    WithLeaf(Label),
    /// The leaf subdivides the edge whose one side carries these labels.
    OnEdge(BTreeSet<Label>),
}

/// Which network edge receives a re-inserted leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// The pendant edge of this leaf.
    PendantOf(Label),
    /// The first edge on the image path of a forest edge, given by side.
    ImageOf { side: Side, split: BTreeSet<Label> },
}

/// Undo of a leaf removal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachContext {
    pub x: Label,
    pub anchor: Anchor,
    pub placements: [Placement; 2],
}

/// One end of a deleted forest edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutEnd {
    /// The end is this leaf, isolated after the cut.
    Leaf(Label),
    /// The end was an internal vertex; after the cut its two other edges
    /// merged into the edge with this side.
    Internal(BTreeSet<Label>),
}

/// Undo of an edge cut in one forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeContext {
    pub side: Side,
    pub ends: [CutEnd; 2],
}

fn idx(side: Side) -> usize {
    match side {
        Side::First => 0,
        Side::Second => 1,
    }
}

fn placement_in(forest: &Forest, x: &Label) -> Placement {
    let t = forest.tree_of(x).expect("label present");
    let g = t.graph();
    let vx = t.vertex_of(x).unwrap();
    match g.neighbors(vx).first() {
        None => Placement::Isolated,
        Some(&u) => match g.label(u) {
            Some(y) => Placement::WithLeaf(y.clone()),
            None => {
                let a = *g.neighbors(u).iter().find(|&&w| w != vx).unwrap();
                Placement::OnEdge(t.side_labels(a, u))
            }
        },
    }
}

impl AttachContext {
    /// Context for undoing a `C1` or `C3` step on leaf `x` whose pre-state
    /// is `(f, f2)`.
    pub fn for_step(f: &Forest, f2: &Forest, rule: Rule, x: &Label, partner: Option<&Label>) -> Self {
        let placements = [placement_in(f, x), placement_in(f2, x)];
        let anchor = match (rule, partner) {
            (Rule::C1, Some(y)) => Anchor::PendantOf(y.clone()),
            _ => {
                let i = if f.is_singleton(x) { 1 } else { 0 };
                match &placements[i] {
                    Placement::OnEdge(split) => Anchor::ImageOf {
                        side: if i == 0 { Side::First } else { Side::Second },
                        split: split.clone(),
                    },
                    Placement::WithLeaf(y) => Anchor::PendantOf(y.clone()),
                    Placement::Isolated => {
                        let least = f
                            .ground_set()
                            .into_iter()
                            .find(|l| l != x)
                            .expect("at least two leaves");
                        Anchor::PendantOf(least)
                    }
                }
            }
        };
        AttachContext {
            x: x.clone(),
            anchor,
            placements,
        }
    }
}

impl EdgeContext {
    /// Context for undoing the removal of edge `{u, v}` of component `tree`
    /// of `forest` (the pre-state forest on `side`).
    pub fn for_cut(forest: &Forest, side: Side, tree: usize, u: usize, v: usize) -> Self {
        let t = &forest.trees()[tree];
        let g = t.graph();
        let end = |a: usize, b: usize| match g.label(a) {
            Some(l) => CutEnd::Leaf(l.clone()),
            None => {
                let c = *g.neighbors(a).iter().find(|&&w| w != b).unwrap();
                CutEnd::Internal(t.side_labels(c, a))
            }
        };
        EdgeContext {
            side,
            ends: [end(u, v), end(v, u)],
        }
    }
}

/// A forest with its image in the network under construction.
#[derive(Clone, Debug)]
struct Tracked {
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<Label>>,
    /// Network vertex of each forest vertex.
    phi: Vec<usize>,
    /// Network path of each forest edge `(a, b)`, `a < b`, from `phi[a]`
    /// to `phi[b]`.
    paths: HashMap<(usize, usize), Vec<usize>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Tracked {
    fn singleton(x: Label, nv: usize) -> Self {
        Tracked {
            adj: vec![vec![]],
            labels: vec![Some(x)],
            phi: vec![nv],
            paths: HashMap::new(),
        }
    }

    fn add_vertex(&mut self, label: Option<Label>, nv: usize) -> usize {
        self.adj.push(Vec::new());
        self.labels.push(label);
        self.phi.push(nv);
        self.adj.len() - 1
    }

    /// Adds forest edge `{a, b}` with its image given from `phi[a]`.
    fn add_edge(&mut self, a: usize, b: usize, mut path: Vec<usize>) {
        self.adj[a].push(b);
        self.adj[b].push(a);
        if a > b {
            path.reverse();
        }
        self.paths.insert(key(a, b), path);
    }

    fn remove_edge(&mut self, a: usize, b: usize) -> Vec<usize> {
        self.adj[a].retain(|&w| w != b);
        self.adj[b].retain(|&w| w != a);
        let mut p = self.paths.remove(&key(a, b)).expect("edge has an image");
        if a > b {
            p.reverse();
        }
        p
    }

    fn vertex_of(&self, x: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l.as_ref() == Some(x))
    }

    fn side(&self, start: usize, blocked: usize) -> BTreeSet<Label> {
        let mut seen = HashSet::from([start, blocked]);
        let mut stack = vec![start];
        let mut out = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if let Some(l) = &self.labels[v] {
                out.insert(l.clone());
            }
            for &w in &self.adj[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        out
    }

    /// The forest edge one of whose sides carries exactly `split`, oriented
    /// so that the first vertex is on that side.
    fn edge_by_split(&self, split: &BTreeSet<Label>) -> Option<(usize, usize)> {
        for a in 0..self.adj.len() {
            for &b in &self.adj[a] {
                if &self.side(a, b) == split {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Inserts `s` into every image path that uses network edge `{n1, n2}`.
    fn on_subdivide(&mut self, n1: usize, n2: usize, s: usize) {
        for p in self.paths.values_mut() {
            if let Some(i) = p
                .windows(2)
                .position(|w| (w[0] == n1 && w[1] == n2) || (w[0] == n2 && w[1] == n1))
            {
                p.insert(i + 1, s);
            }
        }
    }

    /// Splits forest edge `{a, b}` at network vertex `s` on its image with a
    /// new forest vertex mapped to `s`.
    fn split_edge_at(&mut self, a: usize, b: usize, s: usize) -> Result<usize, BuildError> {
        let path = self.remove_edge(a, b);
        let i = path
            .iter()
            .position(|&w| w == s)
            .ok_or_else(|| BuildError::ImageTracking(format!("vertex {s} not on the image of the edge")))?;
        if i == 0 || i + 1 == path.len() {
            return Err(BuildError::ImageTracking("split point is an image endpoint".into()));
        }
        let c = self.add_vertex(None, s);
        self.add_edge(a, c, path[..=i].to_vec());
        self.add_edge(c, b, path[i..].to_vec());
        Ok(c)
    }

    fn to_forest(&self) -> Result<Forest, BuildError> {
        let mut e = GraphEdit::new();
        for l in &self.labels {
            e.add_vertex(l.clone());
        }
        for a in 0..self.adj.len() {
            for &b in &self.adj[a] {
                if a < b {
                    e.add_edge(a, b);
                }
            }
        }
        let trees = e
            .components()
            .into_iter()
            .map(PhyloTree::from_graph)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|err| BuildError::ImageTracking(format!("tracked forest invalid: {err}")))?;
        Forest::new(trees).map_err(|err| BuildError::ImageTracking(err.to_string()))
    }

    /// Checks that the tracked data is a vertex-disjoint union of
    /// subdivisions of the forest's trees inside `net`.
    fn check_image(&self, net: &GraphEdit) -> Result<(), String> {
        let mut owner: HashMap<usize, String> = HashMap::new();
        for (v, &nv) in self.phi.iter().enumerate() {
            if !net.alive[nv] {
                return Err(format!("forest vertex {v} maps to a deleted vertex"));
            }
            if owner.insert(nv, format!("vertex {v}")).is_some() {
                return Err(format!("network vertex {nv} is the image of two forest vertices"));
            }
            if let Some(l) = &self.labels[v] {
                if net.labels[nv].as_ref() != Some(l) {
                    return Err(format!("leaf {l} is not mapped to its network leaf"));
                }
            } else if net.labels[nv].is_some() {
                return Err(format!("internal vertex {v} mapped to a network leaf"));
            }
        }
        for a in 0..self.adj.len() {
            for &b in &self.adj[a] {
                if a > b {
                    continue;
                }
                let p = self
                    .paths
                    .get(&(a, b))
                    .ok_or_else(|| format!("edge {{{a}, {b}}} has no image"))?;
                if p.len() < 2 || p[0] != self.phi[a] || p[p.len() - 1] != self.phi[b] {
                    return Err(format!("image of edge {{{a}, {b}}} has wrong endpoints"));
                }
                for w in p.windows(2) {
                    if net.multiplicity(w[0], w[1]) == 0 {
                        return Err(format!("image path of {{{a}, {b}}} uses a non-edge"));
                    }
                }
                for &inner in &p[1..p.len() - 1] {
                    if owner.insert(inner, format!("edge {{{a}, {b}}}")).is_some() {
                        return Err(format!("network vertex {inner} is used twice"));
                    }
                }
            }
        }
        if self.paths.len() != self.adj.iter().map(Vec::len).sum::<usize>() / 2 {
            return Err("stale image paths".into());
        }
        Ok(())
    }
}

/// The network under construction together with images of both current
/// forests.
#[derive(Clone, Debug)]
pub struct BuildState {
    net: GraphEdit,
    forests: [Tracked; 2],
}

impl BuildState {
    /// The one-vertex network `x`, displaying `{x}` twice.
    pub fn new(x: Label) -> Self {
        let mut net = GraphEdit::new();
        let v = net.add_vertex(Some(x.clone()));
        BuildState {
            net,
            forests: [Tracked::singleton(x.clone(), v), Tracked::singleton(x, v)],
        }
    }

    pub fn reticulation_number(&self) -> i64 {
        self.graph().cyclomatic_number()
    }

    pub fn graph(&self) -> LabeledGraph {
        self.net.to_graph().0
    }

    fn leaf(&self, x: &Label) -> Result<usize, BuildError> {
        self.net
            .vertex_of(x)
            .ok_or_else(|| BuildError::ImageTracking(format!("network has no leaf {x}")))
    }

    fn pendant_edge(&self, x: &Label) -> Result<Option<(usize, usize)>, BuildError> {
        let v = self.leaf(x)?;
        Ok(self.net.adj[v].first().map(|&w| (v, w)))
    }

    fn subdivide(&mut self, a: usize, b: usize) -> Result<usize, BuildError> {
        let s = self
            .net
            .subdivide(a, b)
            .ok_or_else(|| BuildError::ImageTracking(format!("no network edge {{{a}, {b}}}")))?;
        for t in &mut self.forests {
            t.on_subdivide(a, b, s);
        }
        Ok(s)
    }

    /// First edge of the image of the forest edge with the given side.
    fn image_edge(&self, side: Side, split: &BTreeSet<Label>) -> Result<(usize, usize), BuildError> {
        let t = &self.forests[idx(side)];
        let (a, b) = t
            .edge_by_split(split)
            .ok_or_else(|| BuildError::ImageTracking(format!("no tracked edge with side {split:?}")))?;
        let p = &t.paths[&key(a, b)];
        Ok((p[0], p[1]))
    }

    /// Re-inserts leaf `x`; keeps the reticulation number.
    pub fn attach_leaf(&mut self, ctx: &AttachContext) -> Result<(), BuildError> {
        let x = &ctx.x;
        if self.net.vertex_of(x).is_some() {
            return Err(BuildError::ImageTracking(format!("leaf {x} already present")));
        }
        let target = match &ctx.anchor {
            Anchor::PendantOf(y) => self.pendant_edge(y)?,
            Anchor::ImageOf { side, split } => Some(self.image_edge(*side, split)?),
        };
        let xv = self.net.add_vertex(Some(x.clone()));
        // `s` is the attachment vertex; with a one-vertex network `x` is
        // joined straight to the existing leaf.
        let s = match target {
            Some((a, b)) => {
                let s = self.subdivide(a, b)?;
                self.net.add_edge(s, xv);
                Some(s)
            }
            None => {
                let Anchor::PendantOf(y) = &ctx.anchor else {
                    return Err(BuildError::ImageTracking("anchor edge missing".into()));
                };
                let yv = self.leaf(y)?;
                self.net.add_edge(xv, yv);
                None
            }
        };
        for (t, placement) in self.forests.iter_mut().zip(&ctx.placements) {
            match placement {
                Placement::Isolated => {
                    t.add_vertex(Some(x.clone()), xv);
                }
                Placement::WithLeaf(y) => {
                    let vy = t
                        .vertex_of(y)
                        .ok_or_else(|| BuildError::ImageTracking(format!("{y} not tracked")))?;
                    if !t.adj[vy].is_empty() {
                        return Err(BuildError::ImageTracking(format!("{y} is not isolated")));
                    }
                    let yv = t.phi[vy];
                    let path = match s {
                        Some(s) if self.net.multiplicity(s, yv) > 0 => vec![xv, s, yv],
                        None => vec![xv, yv],
                        _ => {
                            return Err(BuildError::ImageTracking(format!(
                                "{x} was not attached next to {y}"
                            )))
                        }
                    };
                    let vx = t.add_vertex(Some(x.clone()), xv);
                    t.add_edge(vx, vy, path);
                }
                Placement::OnEdge(split) => {
                    let s = s.ok_or_else(|| BuildError::ImageTracking("no attachment vertex".into()))?;
                    let (a, b) = t
                        .edge_by_split(split)
                        .ok_or_else(|| BuildError::ImageTracking(format!("no tracked edge with side {split:?}")))?;
                    let c = t.split_edge_at(a, b, s)?;
                    let vx = t.add_vertex(Some(x.clone()), xv);
                    t.add_edge(c, vx, vec![s, xv]);
                }
            }
        }
        Ok(())
    }

    /// Restores a cut forest edge; raises the reticulation number by one.
    pub fn add_display_edge(&mut self, ctx: &EdgeContext) -> Result<(), BuildError> {
        let side = idx(ctx.side);
        // Subdivide the network once per end and remember what to reconnect.
        let mut ends = Vec::with_capacity(2);
        for end in &ctx.ends {
            match end {
                CutEnd::Leaf(x) => {
                    let (xv, w) = self
                        .pendant_edge(x)?
                        .ok_or_else(|| BuildError::ImageTracking(format!("{x} has no pendant edge")))?;
                    let s = self.subdivide(xv, w)?;
                    ends.push((s, None));
                }
                CutEnd::Internal(split) => {
                    let (a, b) = self.image_edge(ctx.side, split)?;
                    let s = self.subdivide(a, b)?;
                    ends.push((s, Some(split)));
                }
            }
        }
        let (s1, s2) = (ends[0].0, ends[1].0);
        self.net.add_edge(s1, s2);

        let t = &mut self.forests[side];
        let mut fv = Vec::with_capacity(2);
        for (end, &(s, split)) in ctx.ends.iter().zip(&ends) {
            match (end, split) {
                (CutEnd::Leaf(x), _) => {
                    let v = t
                        .vertex_of(x)
                        .ok_or_else(|| BuildError::ImageTracking(format!("{x} not tracked")))?;
                    if !t.adj[v].is_empty() {
                        return Err(BuildError::ImageTracking(format!("{x} is not isolated after the cut")));
                    }
                    fv.push((v, vec![t.phi[v], s]));
                }
                (CutEnd::Internal(_), Some(split)) => {
                    let (a, b) = t
                        .edge_by_split(split)
                        .ok_or_else(|| BuildError::ImageTracking(format!("no tracked edge with side {split:?}")))?;
                    let c = t.split_edge_at(a, b, s)?;
                    fv.push((c, vec![s]));
                }
                _ => unreachable!(),
            }
        }
        let (u, mut path) = fv[0].clone();
        let (v, tail) = fv[1].clone();
        path.extend(tail.into_iter().rev());
        t.add_edge(u, v, path);
        Ok(())
    }

    /// Checks both images and that the tracked forests equal `(f, f2)`.
    pub fn validate(&self, f: &Forest, f2: &Forest) -> Result<(), BuildError> {
        for (t, expected) in self.forests.iter().zip([f, f2]) {
            t.check_image(&self.net).map_err(BuildError::ImageTracking)?;
            let got = t.to_forest()?;
            if got.canonical_form() != expected.canonical_form() {
                return Err(BuildError::ImageTracking(format!(
                    "tracked forest {got:?} differs from {expected:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn into_network(self) -> Result<PhyloNetwork, BuildError> {
        Ok(PhyloNetwork::from_graph(self.net.to_graph().0)?)
    }
}

/// Builds a network displaying `f` and `f2` with reticulation number at
/// most the weight of `tr`.
pub fn build_network(f: &Forest, f2: &Forest, tr: &ReductionTrace) -> Result<PhyloNetwork, BuildError> {
    let states = replay(f, f2, tr)?;
    let (last, _) = states.last().unwrap();
    let x = last.ground_set().into_iter().next().unwrap();
    let mut state = BuildState::new(x);
    for (i, step) in tr.steps.iter().enumerate().rev() {
        let (a, b) = &states[i];
        match check_step(a, b, step)? {
            StepEffect::RemoveLeaf(x) => {
                let ctx = AttachContext::for_step(a, b, step.rule, &x, step.params.partner.as_ref());
                state.attach_leaf(&ctx)?;
            }
            StepEffect::Cut { side, tree, u, v } => {
                let forest = side.pick(a, b);
                let ctx = EdgeContext::for_cut(forest, side, tree, u, v);
                state.add_display_edge(&ctx)?;
            }
        }
        state.validate(a, b)?;
    }
    state.into_network()
}
