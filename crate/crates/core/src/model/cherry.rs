use std::collections::BTreeSet;

use crate::label::Label;
use crate::model::{EdgeRef, Forest, ModelError, PhyloTree};

/// Which of the four mutually exclusive situations a cherry `(x, y)` of one
/// forest is in with respect to another forest on the same labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CherryCase {
    /// (i) `(x, y)` is a cherry of the other forest too.
    SameCherry,
    /// (ii) `(leaf, partner)` is a cherry of the other forest, with
    /// `leaf ∈ {x, y}` and `partner ∉ {x, y}`.
    OtherCherry { leaf: Label, partner: Label },
    /// (iii) same tree, neither leaf in a cherry.
    SameTreeNoCherry,
    /// (iv) different trees, neither leaf in a cherry.
    DifferentTreesNoCherry,
}

/// A pendant subtree `((x,y),p)` or `((x,y),(p,q))` around the cherry
/// `(x, y)`. Edge fields are vertex pairs in the owning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantShape {
    pub x: Label,
    pub y: Label,
    pub p: Label,
    pub q: Option<Label>,
    /// False when the shape is the whole tree.
    pub proper: bool,
    pub(crate) p_edge: (usize, usize),
    pub(crate) q_edge: Option<(usize, usize)>,
    pub(crate) pq_edge: Option<(usize, usize)>,
    pub(crate) cut_edge: Option<(usize, usize)>,
}

impl PendantShape {
    pub fn is_quad(&self) -> bool {
        self.q.is_some()
    }

    pub fn e_p(&self) -> EdgeRef {
        EdgeRef::PendantOf(self.p.clone())
    }

    pub fn e_q(&self) -> Option<EdgeRef> {
        self.q.clone().map(EdgeRef::PendantOf)
    }

    /// `e_{(p,q)}` for the quad shape.
    pub fn e_pq(&self) -> Option<EdgeRef> {
        let q = self.q.clone()?;
        Some(EdgeRef::PendantSubtree(BTreeSet::from([self.p.clone(), q])))
    }

    /// The cut-edge giving rise to the whole shape, when proper.
    pub fn e_shape(&self) -> Option<EdgeRef> {
        if !self.proper {
            return None;
        }
        let mut s = BTreeSet::from([self.x.clone(), self.y.clone(), self.p.clone()]);
        if let Some(q) = &self.q {
            s.insert(q.clone());
        }
        Some(EdgeRef::PendantSubtree(s))
    }
}

impl PhyloTree {
    /// Every `((x,y),p)` and `((x,y),(p,q))` pendant subtree around the
    /// cherry, proper or not. Quads list `p < q`.
    pub fn pendant_shapes(&self, x: &Label, y: &Label) -> Result<Vec<PendantShape>, ModelError> {
        if !self.has_cherry(x, y) {
            return Err(ModelError::NotACherry(x.clone(), y.clone()));
        }
        let g = &self.g;
        let mut out = Vec::new();
        if g.vertex_count() == 2 {
            return Ok(out);
        }
        let vx = self.vertex_of(x).unwrap();
        let vy = self.vertex_of(y).unwrap();
        let c = g.adj[vx][0];
        let d = *g.adj[c].iter().find(|&&w| w != vx && w != vy).unwrap();
        let shape = |p: Label, q, proper, p_edge, q_edge, pq_edge, cut_edge| PendantShape {
            x: x.clone(),
            y: y.clone(),
            p,
            q,
            proper,
            p_edge,
            q_edge,
            pq_edge,
            cut_edge,
        };
        if let Some(p) = g.label(d) {
            out.push(shape(p.clone(), None, false, (d, c), None, None, None));
            return Ok(out);
        }
        let others: Vec<usize> = g.adj[d].iter().copied().filter(|&w| w != c).collect();
        for (i, &a) in others.iter().enumerate() {
            let o = others[1 - i];
            if let Some(p) = g.label(a) {
                out.push(shape(p.clone(), None, true, (a, d), None, None, Some((d, o))));
            }
        }
        if let (Some(p), Some(q)) = (g.label(others[0]), g.label(others[1])) {
            let (pa, qa) = (others[0], others[1]);
            let ((p, pa), (q, qa)) = if p < q { ((p, pa), (q, qa)) } else { ((q, qa), (p, pa)) };
            out.push(shape(
                p.clone(),
                Some(q.clone()),
                false,
                (pa, d),
                Some((qa, d)),
                Some((c, d)),
                None,
            ));
        }
        for (i, &a) in others.iter().enumerate() {
            if g.is_labeled(a) {
                continue;
            }
            let o = others[1 - i];
            let leaves: Vec<usize> = g.adj[a]
                .iter()
                .copied()
                .filter(|&w| w != d && g.is_labeled(w))
                .collect();
            if leaves.len() == 2 {
                let (mut pa, mut qa) = (leaves[0], leaves[1]);
                if g.label(qa) < g.label(pa) {
                    std::mem::swap(&mut pa, &mut qa);
                }
                out.push(shape(
                    g.label(pa).unwrap().clone(),
                    Some(g.label(qa).unwrap().clone()),
                    true,
                    (pa, a),
                    Some((qa, a)),
                    Some((a, d)),
                    Some((d, o)),
                ));
            }
        }
        Ok(out)
    }

    /// The most specific pendant shape around the cherry: a quad if one
    /// exists, else a triple; proper shapes preferred.
    pub fn find_pendant_shape(&self, x: &Label, y: &Label) -> Result<Option<PendantShape>, ModelError> {
        let mut shapes = self.pendant_shapes(x, y)?;
        shapes.sort_by_key(|s| (!s.is_quad(), !s.proper));
        Ok(shapes.into_iter().next())
    }
}

/// Classifies a cherry `(x, y)` of `f` against `other`. Case (i) wins over
/// (ii) when a three-leaf component makes both true.
pub fn classify(f: &Forest, other: &Forest, x: &Label, y: &Label) -> Result<CherryCase, ModelError> {
    if !f.has_cherry(x, y) {
        return Err(ModelError::NotACherry(x.clone(), y.clone()));
    }
    for l in [x, y] {
        if other.component_of(l).is_none() {
            return Err(ModelError::UnknownLabel(l.clone()));
        }
    }
    if other.has_cherry(x, y) {
        return Ok(CherryCase::SameCherry);
    }
    for (leaf, skip) in [(x, y), (y, x)] {
        let t = other.tree_of(leaf).unwrap();
        if let Some(z) = t.cherry_partners(leaf).into_iter().find(|z| z != skip) {
            return Ok(CherryCase::OtherCherry {
                leaf: leaf.clone(),
                partner: z,
            });
        }
    }
    if other.same_tree(x, y) {
        Ok(CherryCase::SameTreeNoCherry)
    } else {
        Ok(CherryCase::DifferentTreesNoCherry)
    }
}
