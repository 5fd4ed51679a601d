use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::LabeledGraph;
use crate::io::{strip_comment, ParseError};
use crate::label::{is_reserved, Label};
use crate::network::PseudoNetwork;

/// Parses an edge-list network document. See [`parse_network_named`].
pub fn parse_network(text: &str) -> Result<PseudoNetwork, ParseError> {
    parse_network_named(text).map(|(n, _)| n)
}

/// Parses an edge-list network document and also returns the vertex names
/// in vertex-id order.
///
/// Each line is `u -- v` or, for a one-vertex network, a single name.
/// Vertices of degree at most one are leaves labeled by their names.
pub fn parse_network_named(text: &str) -> Result<(PseudoNetwork, Vec<String>), ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut first_seen: Vec<(usize, usize)> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut lines_seen = 0;

    let mut intern = |name: &str, pos: (usize, usize), adj: &mut Vec<Vec<usize>>| -> usize {
        if let Some(&id) = ids.get(name) {
            return id;
        }
        let id = names.len();
        ids.insert(name.to_string(), id);
        names.push(name.to_string());
        first_seen.push(pos);
        adj.push(Vec::new());
        id
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        lines_seen += 1;
        for &(col, tok) in &tokens {
            if tok != "--" && (tok.chars().any(is_reserved) || tok.contains("--")) {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: col,
                    message: format!("invalid vertex name {tok:?}"),
                });
            }
        }
        match tokens.as_slice() {
            [(col, name)] if *name != "--" => {
                intern(name, (line_no, *col), &mut adj);
            }
            [(cu, u), (_, "--"), (cv, v)] if *u != "--" && *v != "--" => {
                if u == v {
                    return Err(ParseError::Syntax {
                        line: line_no,
                        column: *cv,
                        message: format!("self-loop at {u}"),
                    });
                }
                let a = intern(u, (line_no, *cu), &mut adj);
                let b = intern(v, (line_no, *cv), &mut adj);
                if adj[a].iter().filter(|&&w| w == b).count() >= 2 {
                    return Err(ParseError::TripleEdge {
                        line: line_no,
                        column: *cu,
                        u: u.to_string(),
                        v: v.to_string(),
                    });
                }
                adj[a].push(b);
                adj[b].push(a);
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: tokens[0].0,
                    message: "expected 'u -- v' or a single vertex name".into(),
                })
            }
        }
    }
    if names.is_empty() {
        return Err(ParseError::Syntax {
            line: 1,
            column: 1,
            message: "document contains no vertices".into(),
        });
    }
    if lines_seen > 1 && adj.iter().any(Vec::is_empty) {
        let v = adj.iter().position(Vec::is_empty).unwrap();
        let (line, column) = first_seen[v];
        return Err(ParseError::Disconnected { line, column });
    }

    let mut labels = Vec::with_capacity(names.len());
    for (v, name) in names.iter().enumerate() {
        let d = adj[v].len();
        let (line, column) = first_seen[v];
        if d <= 1 {
            let l = Label::new(name).ok_or_else(|| ParseError::Syntax {
                line,
                column,
                message: format!("invalid leaf label {name:?}"),
            })?;
            labels.push(Some(l));
        } else if d == 3 {
            labels.push(None);
        } else {
            return Err(ParseError::DegreeViolation {
                line,
                column,
                vertex: name.clone(),
                degree: d,
            });
        }
    }
    let g = LabeledGraph { adj, labels };
    if !g.is_connected() {
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let v = seen.iter().position(|s| !s).unwrap();
        let (line, column) = first_seen[v];
        return Err(ParseError::Disconnected { line, column });
    }
    let n = PseudoNetwork::from_graph(g).map_err(|e| ParseError::Syntax {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok((n, names))
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    for (i, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some((s, sc)) = start.take() {
                out.push((sc, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, sc)) = start {
        out.push((sc, &line[s..]));
    }
    out
}

/// Display names for every vertex: leaves by label, internal vertices
/// `v1, v2, ...` in breadth-first order from the smallest leaf, skipping
/// names that collide with a label.
pub fn vertex_names(n: &PseudoNetwork) -> Vec<String> {
    let g = n.graph();
    let taken: BTreeSet<String> = n.labels().iter().map(|l| l.as_str().to_string()).collect();
    let mut names: Vec<Option<String>> = (0..g.vertex_count())
        .map(|v| g.label(v).map(|l| l.as_str().to_string()))
        .collect();
    let start = n
        .labels()
        .iter()
        .next()
        .and_then(|l| g.vertex_of(l))
        .unwrap_or(0);
    let mut counter = 0;
    let mut fresh = || loop {
        counter += 1;
        let name = format!("v{counter}");
        if !taken.contains(&name) {
            return name;
        }
    };
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        if names[v].is_none() {
            names[v] = Some(fresh());
        }
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    names.into_iter().map(|n| n.unwrap_or_else(&mut fresh)).collect()
}

/// Edge-list rendering with one `u -- v` line per edge, sorted by names.
pub fn serialize_network(n: &PseudoNetwork) -> String {
    let names = vertex_names(n);
    let g = n.graph();
    if g.edge_count() == 0 {
        return format!("{}\n", names[0]);
    }
    let mut lines: Vec<(&str, &str)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (names[u].as_str(), names[v].as_str());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    lines.sort_unstable();
    let mut out = String::new();
    for (a, b) in lines {
        out.push_str(a);
        out.push_str(" -- ");
        out.push_str(b);
        out.push('\n');
    }
    out
}
