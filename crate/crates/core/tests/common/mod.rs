#![allow(dead_code)]

use std::path::{Path, PathBuf};

use cherrypick::io::{parse_forest, parse_network, parse_trace};
use cherrypick::ParseError;

pub fn fixture_dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(sub)
}

pub fn read_fixture(sub: &str, name: &str) -> String {
    std::fs::read_to_string(fixture_dir(sub).join(name)).unwrap()
}

/// One malformed document and the error it must produce.
pub struct Malformed {
    pub name: String,
    pub kind: String,
    pub position: (usize, usize),
}

pub fn malformed_fixtures() -> Vec<Malformed> {
    read_fixture("malformed", "expected.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let (line, col) = f[2].split_once(':').unwrap();
            Malformed {
                name: f[0].to_string(),
                kind: f[1].to_string(),
                position: (line.parse().unwrap(), col.parse().unwrap()),
            }
        })
        .collect()
}

/// Parses a fixture with the parser its extension selects.
pub fn parse_fixture(name: &str) -> Result<(), ParseError> {
    let text = read_fixture("malformed", name);
    match Path::new(name).extension().and_then(|e| e.to_str()) {
        Some("nwk") => parse_forest(&text).map(drop),
        Some("net") => parse_network(&text).map(drop),
        Some("json") => parse_trace(&text).map(drop),
        other => panic!("unknown fixture type {other:?}"),
    }
}

pub fn kind(e: &ParseError) -> &'static str {
    match e {
        ParseError::Syntax { .. } => "Syntax",
        ParseError::DuplicateLabel { .. } => "DuplicateLabel",
        ParseError::NonBinary { .. } => "NonBinary",
        ParseError::DegreeViolation { .. } => "DegreeViolation",
        ParseError::Disconnected { .. } => "Disconnected",
        ParseError::TripleEdge { .. } => "TripleEdge",
        ParseError::Schema { .. } => "Schema",
    }
}

/// Checks one fixture, describing the mismatch on failure.
pub fn check_malformed(m: &Malformed) -> Result<(), String> {
    match parse_fixture(&m.name) {
        Ok(()) => Err(format!("{} parsed", m.name)),
        Err(e) if kind(&e) == m.kind && e.position() == m.position => Ok(()),
        Err(e) => Err(format!("{}: got {e:?}", m.name)),
    }
}
