use crate::graph::GraphEdit;
use crate::label::Label;
use crate::network::blob::blobs_of;
use crate::network::{blobs, Blob, NetworkError, PhyloNetwork, PseudoNetwork};

/// Outcome of suppressing multi-edges until the network is simple.
#[derive(Clone, Debug)]
pub struct SimplificationResult {
    pub network: PhyloNetwork,
    /// Number of multi-edge suppressions; equals the drop in `r`.
    pub suppressed_count: usize,
}

/// The two vertices adjacent to the attachment point of leaf `x`, or `None`
/// when `x` hangs off another leaf or is alone.
pub fn attachment_neighbors(n: &PseudoNetwork, x: &Label) -> Result<Option<(usize, usize)>, NetworkError> {
    let v = n.vertex_of(x).ok_or_else(|| NetworkError::UnknownLabel(x.clone()))?;
    let g = n.graph();
    let Some(&u) = g.neighbors(v).first() else {
        return Ok(None);
    };
    if g.is_labeled(u) {
        return Ok(None);
    }
    let others: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| w != v).collect();
    Ok(Some((others[0], others[1])))
}

/// `N - x`: delete leaf `x` and its pendant edge, suppress the attachment
/// vertex. The result is simple iff the attachment vertex's other two
/// neighbors were non-adjacent.
pub fn remove_network_leaf(n: &PhyloNetwork, x: &Label) -> Result<PseudoNetwork, NetworkError> {
    let v = n.vertex_of(x).ok_or_else(|| NetworkError::UnknownLabel(x.clone()))?;
    if n.labels().len() < 2 {
        return Err(NetworkError::TooSmall);
    }
    let mut e = GraphEdit::from_graph(n.graph());
    let u = e.adj[v][0];
    e.remove_vertex(v);
    if e.labels[u].is_none() {
        e.suppress(u)
            .ok_or_else(|| NetworkError::UnsupportedConfiguration("cannot suppress attachment vertex".into()))?;
    }
    let (g, _) = e.to_graph();
    PseudoNetwork::from_graph(g)
}

/// Suppresses the single multi-edge of `n` and any multi-edges this creates,
/// returning the resulting phylogenetic network.
///
/// Requires at most one multi-edge whose blob is incident with at least two
/// cut-edges; the same condition is re-checked before every suppression.
pub fn simplify(n: &PseudoNetwork) -> Result<SimplificationResult, NetworkError> {
    let multi = n.multi_edges();
    if multi.len() > 1 {
        return Err(NetworkError::UnsupportedConfiguration(format!(
            "{} multi-edges present",
            multi.len()
        )));
    }
    let e = GraphEdit::from_graph(n.graph());
    let (e, count) = simplify_edit(e)?;
    let (g, _) = e.to_graph();
    let network = PhyloNetwork::from_graph(g)?;
    Ok(SimplificationResult {
        network,
        suppressed_count: count,
    })
}

fn first_multi_edge(e: &GraphEdit) -> Option<(usize, usize)> {
    for u in 0..e.adj.len() {
        if !e.alive[u] {
            continue;
        }
        for &v in &e.adj[u] {
            if u < v && e.multiplicity(u, v) >= 2 {
                return Some((u, v));
            }
        }
    }
    None
}

fn simplify_edit(mut e: GraphEdit) -> Result<(GraphEdit, usize), NetworkError> {
    let mut count = 0;
    while let Some((u, v)) = first_multi_edge(&e) {
        if e.multiplicity(u, v) > 2 {
            return Err(NetworkError::TripleEdge(u, v));
        }
        let (g, index) = e.to_graph();
        let (cu, cv) = (index[u], index[v]);
        let blob = blobs_of(&g)
            .into_iter()
            .find(|b| b.contains_vertex(cu) && b.contains_vertex(cv) && b.contains_edge(cu, cv))
            .expect("a multi-edge lies in a blob");
        if blob.incident.len() < 2 {
            return Err(NetworkError::UnsupportedConfiguration(
                "multi-edge blob is incident with fewer than two cut-edges".into(),
            ));
        }
        e.remove_edge(u, v);
        let p = *e.adj[u].iter().find(|&&w| w != v).unwrap();
        let q = *e.adj[v].iter().find(|&&w| w != u).unwrap();
        if p == q {
            return Err(NetworkError::UnsupportedConfiguration(
                "multi-edge endpoints share their outer neighbor".into(),
            ));
        }
        e.suppress(u).expect("u has degree two");
        e.suppress(v).expect("v has degree two");
        count += 1;
    }
    Ok((e, count))
}

/// Deletes edge `{a, b}` of a pendant blob with at least two leaves,
/// suppresses its endpoints and simplifies any multi-edge this creates.
pub fn remove_blob_edge(n: &PhyloNetwork, a: usize, b: usize) -> Result<PhyloNetwork, NetworkError> {
    let g = n.graph();
    if a >= g.vertex_count() || b >= g.vertex_count() || g.multiplicity(a, b) == 0 {
        return Err(NetworkError::NotABlobEdge(a, b));
    }
    let blob = blobs(n)
        .into_iter()
        .find(|bl| bl.contains_edge(a, b))
        .ok_or(NetworkError::NotABlobEdge(a, b))?;
    if !blob.pendant {
        return Err(NetworkError::NotPendantBlob);
    }
    if blob.leaves.len() < 2 {
        return Err(NetworkError::TooFewLeaves(blob.leaves.len()));
    }
    let mut e = GraphEdit::from_graph(g);
    e.remove_edge(a, b);
    for v in [a, b] {
        e.suppress(v).ok_or_else(|| {
            NetworkError::UnsupportedConfiguration("cannot suppress blob-edge endpoint".into())
        })?;
    }
    let (e, _) = simplify_edit(e)?;
    let (g, _) = e.to_graph();
    PhyloNetwork::from_graph(g)
}

/// `N - B` for a pendant blob with at most one incident leaf.
///
/// With no leaf the blob is cut away and its attachment vertex suppressed,
/// re-subdividing when that suppression would create a multi-edge. With one
/// leaf `x` the blob is replaced by `x`.
pub fn remove_pendant_blob(n: &PhyloNetwork, blob: &Blob) -> Result<PhyloNetwork, NetworkError> {
    let current = blobs(n)
        .into_iter()
        .find(|b| b.vertices == blob.vertices)
        .ok_or(NetworkError::NotPendantBlob)?;
    if !current.pendant {
        return Err(NetworkError::NotPendantBlob);
    }
    if current.leaves.len() > 1 {
        return Err(NetworkError::TooManyLeaves(current.leaves.len()));
    }
    let g = n.graph();
    let outer: Vec<(usize, usize)> = current
        .incident
        .iter()
        .copied()
        .filter(|&(_, w)| !(g.degree(w) <= 1 && g.is_labeled(w)))
        .collect();
    let mut e = GraphEdit::from_graph(g);
    if let Some(x) = current.leaves.iter().next() {
        let xv = g.vertex_of(x).unwrap();
        match outer.first() {
            None => {
                let mut single = GraphEdit::new();
                single.add_vertex(Some(x.clone()));
                let (g, _) = single.to_graph();
                return PhyloNetwork::from_graph(g);
            }
            Some(&(_, u)) => {
                for &v in &current.vertices {
                    e.remove_vertex(v);
                }
                e.add_edge(xv, u);
            }
        }
    } else {
        let &(_, u) = outer.first().ok_or(NetworkError::NotPendantBlob)?;
        for &v in &current.vertices {
            e.remove_vertex(v);
        }
        let (w, w2) = (e.adj[u][0], e.adj[u][1]);
        if e.multiplicity(w, w2) == 0 {
            e.suppress(u).expect("u has degree two");
        } else {
            let u2 = e.subdivide(w, w2).expect("edge {w, w'} exists");
            e.add_edge(u, u2);
        }
    }
    let (g, _) = e.to_graph();
    PhyloNetwork::from_graph(g)
}
