use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;
use crate::model::EdgeRef;
use crate::testutil::*;

fn keys(ts: &[PhyloTree]) -> BTreeSet<String> {
    ts.iter().map(PhyloTree::canonical).collect()
}

fn relabel(t: &PhyloTree, map: &BTreeMap<Label, Label>) -> PhyloTree {
    let mut g = t.graph().clone();
    for l in g.labels.iter_mut().flatten() {
        *l = map[l].clone();
    }
    PhyloTree::from_graph(g).unwrap()
}

fn double_factorial(mut k: usize) -> usize {
    let mut out = 1;
    while k > 1 {
        out *= k;
        k -= 2;
    }
    out
}

#[test]
fn quartet_neighbors() {
    let qs = quartets();
    let n = tbr_neighbors(&qs[0]).unwrap();
    assert_eq!(keys(&n), keys(&qs[1..]));
    assert_eq!(tbr_neighbors(&tree("(1,2,3);")), Err(OracleError::TooSmall));
}

#[test]
fn quartet_distances() {
    let qs = quartets();
    for (i, a) in qs.iter().enumerate() {
        for (j, b) in qs.iter().enumerate() {
            assert_eq!(tbr_distance_bfs(a, b, 10), Ok(usize::from(i != j)));
        }
    }
    assert_eq!(tbr_distance_bfs(&qs[0], &qs[1], 0), Err(OracleError::CapExceeded(0)));
    assert_eq!(
        tbr_distance_bfs(&qs[0], &tree("((1,2),(3,5));"), 3),
        Err(OracleError::LabelMismatch)
    );
}

#[test]
fn closure_counts() {
    for n in 4..=6 {
        let t = seeded_forest(n, 1, n as u64).trees()[0].clone();
        assert_eq!(tbr_closure_size(&t), double_factorial(2 * n - 5));
    }
    assert_eq!(double_factorial(2 * 6 - 5), 105);
}

#[test]
fn square_displays() {
    let sq = net(SQUARE);
    let yes = |s: &str| displays(&sq, &forest(&[s])).unwrap().is_some();
    assert!(yes("((1,2),(3,4));"));
    assert!(yes("((1,4),(2,3));"));
    assert!(!yes("((1,3),(2,4));"));
    assert!(displays(&sq, &forest(&["(1,3);", "(2,4);"])).unwrap().is_none());
    assert!(displays(&sq, &forest(&["(1,2);", "(3,4);"])).unwrap().is_some());
    assert_eq!(
        displays(&sq, &forest(&["(1,9);"])),
        Err(OracleError::UnknownLabel(l("9")))
    );
}

#[test]
fn scale_guard() {
    let mut text = String::new();
    for i in 0..20 {
        text.push_str(&format!("c{i} -- c{}\nc{i} -- x{i}\n", (i + 1) % 20));
    }
    let big = net(&text);
    assert_eq!(big.vertex_count(), 40);
    assert!(displays(&big, &forest(&["(x0,x1);"])).is_ok());
    let mut e = crate::graph::GraphEdit::from_graph(big.graph());
    let a = e.vertex_of(&l("x0")).unwrap();
    let s = e.subdivide(a, e.adj[a][0]).unwrap();
    let y = e.add_vertex(Some(l("y")));
    e.add_edge(s, y);
    let bigger = PseudoNetwork::from_graph(e.to_graph().0).unwrap();
    assert_eq!(
        displays(&bigger, &forest(&["(x0,x1);"])),
        Err(OracleError::ScaleGuard(42))
    );
}

#[test]
fn tampered_images_are_rejected() {
    let sq = net(SQUARE);
    let f = forest(&["((1,2),(3,4));"]);
    let img = displays(&sq, &f).unwrap().unwrap();
    assert!(verify_embedding(&sq, &f, &img));
    let mut bad = img.clone();
    bad.components[0].edge_paths[0].1.pop();
    assert!(!verify_embedding(&sq, &f, &bad));
    let mut bad = img.clone();
    bad.components[0].vertex_map[0].1 = bad.components[0].vertex_map[1].1;
    assert!(!verify_embedding(&sq, &f, &bad));
    assert!(!verify_embedding(&sq, &forest(&["(1,2);", "(3,4);"]), &img));
}

fn tree_strategy(lo: usize, hi: usize) -> impl Strategy<Value = PhyloTree> {
    (lo..=hi, any::<u64>()).prop_map(|(n, s)| seeded_forest(n, 1, s).trees()[0].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn neighbors_exclude_self_and_commute_with_relabeling(t in tree_strategy(4, 7), seed: u64) {
        let n = tbr_neighbors(&t).unwrap();
        prop_assert!(!keys(&n).contains(&t.canonical()));
        let ls: Vec<Label> = t.labels();
        let mut shuffled = ls.clone();
        let k = (seed as usize) % ls.len();
        shuffled.rotate_left(k);
        let map: BTreeMap<Label, Label> = ls.into_iter().zip(shuffled).collect();
        let moved = tbr_neighbors(&relabel(&t, &map)).unwrap();
        prop_assert_eq!(moved.len(), n.len());
        let mapped: BTreeSet<String> = n.iter().map(|u| relabel(u, &map).canonical()).collect();
        prop_assert_eq!(mapped, keys(&moved));
    }

    #[test]
    fn distance_is_symmetric(a in tree_strategy(5, 5), s: u64) {
        let b = seeded_forest(5, 1, s).trees()[0].clone();
        prop_assert_eq!(tbr_distance_bfs(&a, &b, 10), tbr_distance_bfs(&b, &a, 10));
    }

    /// A tree displays itself, every forest obtained by deleting edges from
    /// it, and display survives further edge deletion.
    #[test]
    fn trees_display_their_cuts(t in tree_strategy(1, 8), picks in proptest::collection::vec(any::<usize>(), 0..4)) {
        let n = crate::network::PhyloNetwork::from_tree(&t);
        let mut f = Forest::from_tree(t.clone());
        let img = displays(&n, &f).unwrap().unwrap();
        prop_assert!(verify_embedding(&n, &f, &img));
        for p in picks {
            let edges: Vec<(usize, usize, usize)> = f.trees().iter().enumerate()
                .flat_map(|(i, t)| t.edges().into_iter().map(move |(u, v)| (i, u, v))).collect();
            if edges.is_empty() {
                break;
            }
            let (tree, u, v) = edges[p % edges.len()];
            f = f.remove_edge(&EdgeRef::Explicit { tree, u, v }).unwrap();
            let img = displays(&n, &f).unwrap();
            prop_assert!(img.is_some());
            prop_assert!(verify_embedding(&n, &f, &img.unwrap()));
        }
    }

    #[test]
    fn display_is_monotone_on_the_square(pick: usize, cut: usize) {
        let sq = net(SQUARE);
        let t = &quartets()[pick % 3];
        let f = Forest::from_tree(t.clone());
        let shown = displays(&sq, &f).unwrap().is_some();
        let edges = t.edges();
        let (u, v) = edges[cut % edges.len()];
        let g = f.remove_edge(&EdgeRef::Explicit { tree: 0, u, v }).unwrap();
        if shown {
            prop_assert!(displays(&sq, &g).unwrap().is_some());
        }
    }
}
