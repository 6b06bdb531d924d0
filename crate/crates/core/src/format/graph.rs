use super::{ParseError, SourceSpan};
use crate::generators::SimpleGraph;

/// Parses an edge list: one `u v` pair per line (0-based), an optional
/// `n N` line fixing the vertex count, `#` comments. Without `n`, the vertex
/// count is one more than the largest endpoint.
pub fn parse_graph(text: &str) -> Result<SimpleGraph, ParseError> {
    parse_graph_in(text, None)
}

pub fn parse_graph_in(text: &str, file: Option<&str>) -> Result<SimpleGraph, ParseError> {
    let mut declared: Option<(usize, SourceSpan)> = None;
    let mut pairs: Vec<(usize, usize, SourceSpan)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = line.len() - line.trim_start().len() + 1;
        let span = SourceSpan::new(file, i + 1, start, start + trimmed.chars().count() - 1);
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let number = |s: &str| s.parse::<usize>().map_err(|_| ParseError::new(span.clone(), format!("`{s}` is not a vertex number")));
        match fields.as_slice() {
            ["n", count] => {
                if declared.is_some() {
                    return Err(ParseError::new(span, "vertex count declared twice"));
                }
                declared = Some((number(count)?, span));
            }
            [u, v] => {
                let (u, v) = (number(u)?, number(v)?);
                if u == v {
                    return Err(ParseError::new(span, format!("self-loop at vertex {u}")));
                }
                pairs.push((u, v, span));
            }
            _ => return Err(ParseError::new(span, "expected `u v` or `n N`")),
        }
    }
    let n = match &declared {
        Some((n, _)) => *n,
        None => pairs.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0),
    };
    if let Some((u, v, span)) = pairs.iter().find(|&&(u, v, _)| u.max(v) >= n) {
        return Err(ParseError::new(span.clone(), format!("edge {u} {v} exceeds the declared {n} vertices")));
    }
    Ok(SimpleGraph::new(n, pairs.into_iter().map(|(u, v, _)| (u, v))).expect("checked above"))
}

/// Renders a graph with an explicit vertex count.
pub fn write_graph(g: &SimpleGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
