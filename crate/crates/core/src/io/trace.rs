use crate::cps::{ReductionStep, ReductionTrace};
use crate::io::ParseError;

/// Parses a JSON trace document and checks each step's parameters against
/// its rule. Whether the steps replay is not checked here.
pub fn parse_trace(text: &str) -> Result<ReductionTrace, ParseError> {
    let values: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| ParseError::Schema {
        line: e.line().max(1),
        column: e.column().max(1),
        message: e.to_string(),
    })?;
    let mut steps = Vec::with_capacity(values.len());
    for (i, v) in values.into_iter().enumerate() {
        let at = |message: String| {
            let (line, column) = element_position(text, i);
            ParseError::Schema { line, column, message: format!("step {i}: {message}") }
        };
        let step: ReductionStep = serde_json::from_value(v).map_err(|e| at(e.to_string()))?;
        step.check_schema().map_err(at)?;
        steps.push(step);
    }
    Ok(ReductionTrace { steps })
}

pub fn serialize_trace(tr: &ReductionTrace) -> String {
    let mut s = serde_json::to_string_pretty(tr).expect("traces always serialize");
    s.push('\n');
    s
}

/// Line and column of the opening token of the `index`-th element of the
/// top-level JSON array.
fn element_position(text: &str, index: usize) -> (usize, usize) {
    let (mut line, mut col) = (1, 0);
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut seen = 0usize;
    let mut expecting = false;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 0;
            continue;
        }
        col += 1;
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        if expecting && !c.is_whitespace() {
            if seen == index {
                return (line, col);
            }
            seen += 1;
            expecting = false;
        }
        match c {
            '"' => in_string = true,
            '[' | '{' => {
                depth += 1;
                if depth == 1 {
                    expecting = true;
                }
            }
            ']' | '}' => depth = depth.saturating_sub(1),
            ',' if depth == 1 => expecting = true,
            _ => {}
        }
    }
    (1, 1)
}
