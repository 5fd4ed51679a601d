use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gen::random_forest;
use crate::io::{parse_forest, parse_network, parse_tree};
use crate::label::Label;
use crate::model::{Forest, PhyloTree};
use crate::network::{PhyloNetwork, PseudoNetwork};

pub fn forest(lines: &[&str]) -> Forest {
    parse_forest(&lines.join("\n")).unwrap()
}

pub fn tree(s: &str) -> PhyloTree {
    parse_tree(s).unwrap()
}

pub fn net(s: &str) -> PseudoNetwork {
    parse_network(s).unwrap()
}

pub fn phylo(s: &str) -> PhyloNetwork {
    net(s).into_phylo().unwrap()
}

pub fn l(s: &str) -> Label {
    Label::from(s)
}

pub fn seeded_forest(n: usize, k: usize, seed: u64) -> Forest {
    random_forest(n, k, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The 4-cycle `a-b-c-d` with leaves 1..4 attached in order.
pub const SQUARE: &str = "a -- b\nb -- c\nc -- d\nd -- a\n1 -- a\n2 -- b\n3 -- c\n4 -- d\n";

/// Triangle `a, b, c` with leaves x, y, z.
pub const TRIANGLE: &str = "a -- b\nb -- c\nc -- a\nx -- a\ny -- b\nz -- c\n";

/// All 15 unrooted binary trees on `1..=5`, written independently of the
/// generator: a middle leaf and a pairing of the other four.
pub fn all_five_leaf_trees() -> Vec<PhyloTree> {
    let mut out = Vec::new();
    for m in 1..=5 {
        let rest: Vec<i32> = (1..=5).filter(|&i| i != m).collect();
        let (a, others) = (rest[0], &rest[1..]);
        for &b in others {
            let cd: Vec<i32> = others.iter().copied().filter(|&i| i != b).collect();
            out.push(tree(&format!("(({a},{b}),{m},({},{}));", cd[0], cd[1])));
        }
    }
    out
}

/// The three quartets 12|34, 13|24, 14|23.
pub fn quartets() -> Vec<PhyloTree> {
    ["((1,2),(3,4));", "((1,3),(2,4));", "((1,4),(2,3));"]
        .iter()
        .map(|s| tree(s))
        .collect()
}
