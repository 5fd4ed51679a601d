use std::collections::BTreeMap;

use crate::graph::GraphEdit;
use crate::io::{strip_comment, ParseError};
use crate::label::{is_reserved, Label};
use crate::model::{Forest, PhyloTree};

enum Node {
    Leaf(Label, usize),
    Inner(Vec<Node>, usize),
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.syntax(format!("expected '{c}', found '{d}'"))),
            None => Err(self.syntax(format!("expected '{c}', found end of line"))),
        }
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !is_reserved(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// Branch lengths are accepted and discarded.
    fn skip_length(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(':') {
            self.pos += 1;
            let t = self.token();
            if t.parse::<f64>().is_err() {
                return Err(self.syntax(format!("invalid branch length {t:?}")));
            }
        }
        Ok(())
    }

    fn subtree(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some('(') {
            let col = self.column();
            self.pos += 1;
            let mut children = vec![self.subtree()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                children.push(self.subtree()?);
            }
            self.expect(')')?;
            // Internal node names are ignored.
            let _ = self.token();
            self.skip_length()?;
            Ok(Node::Inner(children, col))
        } else {
            self.skip_ws();
            let col = self.column();
            let t = self.token();
            if t.is_empty() {
                return Err(match self.peek() {
                    Some(c) => self.syntax(format!("expected a label, found '{c}'")),
                    None => self.syntax("expected a label, found end of line"),
                });
            }
            let label = Label::new(&t).ok_or_else(|| self.syntax(format!("invalid label {t:?}")))?;
            self.skip_length()?;
            Ok(Node::Leaf(label, col))
        }
    }
}

/// Parses one Newick tree. A root with two children is suppressed, a root
/// with three children is taken as an unrooted trifurcation.
pub fn parse_tree(src: &str) -> Result<PhyloTree, ParseError> {
    parse_tree_at(src, 1)
}

fn parse_tree_at(src: &str, line: usize) -> Result<PhyloTree, ParseError> {
    let (tree, _) = parse_tree_with_labels(src, line)?;
    Ok(tree)
}

fn parse_tree_with_labels(
    src: &str,
    line: usize,
) -> Result<(PhyloTree, Vec<(Label, usize)>), ParseError> {
    let mut cur = Cursor::new(src, line);
    let root = cur.subtree()?;
    cur.expect(';')?;
    if let Some(c) = cur.peek() {
        return Err(cur.syntax(format!("unexpected '{c}' after ';'")));
    }

    let mut g = GraphEdit::new();
    let mut seen: BTreeMap<Label, usize> = BTreeMap::new();
    let mut order = Vec::new();
    let root_col = match &root {
        Node::Leaf(_, c) | Node::Inner(_, c) => *c,
    };
    let r = build(&root, &mut g, &mut seen, &mut order, line, true)?;
    if !g.labels[r].is_some() {
        match g.degree(r) {
            2 => {
                let (a, b) = (g.adj[r][0], g.adj[r][1]);
                g.remove_vertex(r);
                g.add_edge(a, b);
            }
            3 => {}
            d => {
                return Err(ParseError::NonBinary {
                    line,
                    column: root_col,
                    message: format!("root has {d} children"),
                })
            }
        }
    }
    let (graph, _) = g.to_graph();
    let tree = PhyloTree::from_graph(graph).map_err(|e| ParseError::Syntax {
        line,
        column: root_col,
        message: e.to_string(),
    })?;
    Ok((tree, order))
}

fn build(
    node: &Node,
    g: &mut GraphEdit,
    seen: &mut BTreeMap<Label, usize>,
    order: &mut Vec<(Label, usize)>,
    line: usize,
    is_root: bool,
) -> Result<usize, ParseError> {
    match node {
        Node::Leaf(l, col) => {
            if seen.insert(l.clone(), *col).is_some() {
                return Err(ParseError::DuplicateLabel {
                    line,
                    column: *col,
                    label: l.clone(),
                });
            }
            order.push((l.clone(), *col));
            Ok(g.add_vertex(Some(l.clone())))
        }
        Node::Inner(children, col) => {
            if !is_root && children.len() != 2 {
                return Err(ParseError::NonBinary {
                    line,
                    column: *col,
                    message: format!("internal node has {} children", children.len()),
                });
            }
            let v = g.add_vertex(None);
            for c in children {
                let w = build(c, g, seen, order, line, false)?;
                g.add_edge(v, w);
            }
            Ok(v)
        }
    }
}

/// Parses a forest document: one Newick tree per line, `#` comments and
/// blank lines ignored, LF or CRLF line endings.
pub fn parse_forest(text: &str) -> Result<Forest, ParseError> {
    let mut trees = Vec::new();
    let mut seen: BTreeMap<Label, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let (tree, labels) = parse_tree_with_labels(line, i + 1)?;
        for (l, col) in labels {
            if seen.insert(l.clone(), i + 1).is_some() {
                return Err(ParseError::DuplicateLabel {
                    line: i + 1,
                    column: col,
                    label: l,
                });
            }
        }
        trees.push(tree);
    }
    if trees.is_empty() {
        return Err(ParseError::Syntax {
            line: 1,
            column: 1,
            message: "document contains no trees".into(),
        });
    }
    Ok(Forest::from_trees_unchecked(trees))
}

/// Canonical rendering, one component per line in sorted order.
pub fn serialize_forest(f: &Forest) -> String {
    f.canonical_form()
}

const PAIR_HEADERS: [&str; 2] = ["# forest 1", "# forest 2"];

/// Two forest documents under `# forest 1` / `# forest 2` headers.
pub fn serialize_forest_pair(a: &Forest, b: &Forest) -> String {
    format!(
        "{}\n{}{}\n{}",
        PAIR_HEADERS[0],
        serialize_forest(a),
        PAIR_HEADERS[1],
        serialize_forest(b)
    )
}

/// Inverse of [`serialize_forest_pair`].
pub fn parse_forest_pair(text: &str) -> Result<(Forest, Forest), ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let pos = |h: &str| lines.iter().position(|l| l.trim() == h);
    let (Some(a), Some(b)) = (pos(PAIR_HEADERS[0]), pos(PAIR_HEADERS[1])) else {
        return Err(ParseError::Syntax {
            line: 1,
            column: 1,
            message: "missing '# forest 1' / '# forest 2' headers".into(),
        });
    };
    if b < a {
        return Err(ParseError::Syntax {
            line: b + 1,
            column: 1,
            message: "'# forest 2' precedes '# forest 1'".into(),
        });
    }
    // Blank out the other half so reported line numbers stay absolute.
    let half = |from: usize, to: usize| -> String {
        lines
            .iter()
            .enumerate()
            .map(|(i, l)| if i > from && i < to { *l } else { "" })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let first = parse_forest(&half(a, b))?;
    let second = parse_forest(&half(b, lines.len()))?;
    Ok((first, second))
}
