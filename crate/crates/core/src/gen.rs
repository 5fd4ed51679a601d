//! Seeded random trees and forests on labels `1..=n`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::GraphEdit;
use crate::label::Label;
use crate::model::{Forest, PhyloTree};

/// Uniformly random unrooted binary tree on `1..=n` by inserting leaves on
/// uniformly chosen edges.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PhyloTree {
    assert!(n >= 1, "a tree needs at least one leaf");
    let mut e = GraphEdit::new();
    let first = e.add_vertex(Some(Label::from("1")));
    if n == 1 {
        return PhyloTree::from_graph(e.to_graph().0).expect("single vertex");
    }
    let second = e.add_vertex(Some(Label::from("2")));
    e.add_edge(first, second);
    let mut edges = vec![(first, second)];
    for i in 3..=n {
        let k = rng.gen_range(0..edges.len());
        let (a, b) = edges.swap_remove(k);
        let s = e.subdivide(a, b).expect("edge exists");
        let x = e.add_vertex(Some(Label::from(i.to_string().as_str())));
        e.add_edge(s, x);
        edges.extend([(a, s), (s, b), (s, x)]);
    }
    PhyloTree::from_graph(e.to_graph().0).expect("insertion keeps a binary tree")
}

/// Random forest with `k` components (fewer if the tree has too few
/// edges): a random tree with `k - 1` uniformly chosen edges cut.
pub fn random_forest<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Forest {
    let mut f = Forest::from_tree(random_tree(n, rng));
    for _ in 1..k {
        let edges: Vec<(usize, usize, usize)> = f
            .trees()
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.edges().into_iter().map(move |(u, v)| (i, u, v)))
            .collect();
        let Some(&(i, u, v)) = edges.choose(rng) else {
            break;
        };
        f = f.cut(i, u, v).expect("edge exists");
    }
    f
}

/// Two independent random forests on `1..=n` with `k` components each,
/// determined by `seed`.
pub fn random_pair(n: usize, k: usize, seed: u64) -> (Forest, Forest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_forest(n, k, &mut rng);
    let b = random_forest(n, k, &mut rng);
    (a, b)
}
