//! Text formats: `.cq` queries, `.facts` structures, `.edges` graphs and
//! `.decomp.json` decompositions.

mod decomp;
mod facts;
mod graph;
mod lexer;
mod query;

use std::fmt;

pub use decomp::{read_decomposition, write_decomposition};
pub use facts::{parse_facts, parse_facts_in, write_facts};
pub use graph::{parse_graph, parse_graph_in, write_graph};
pub use query::{parse_query, parse_query_in, write_query};

/// Location of a diagnostic: 1-based line and a 1-based, inclusive column
/// range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(file: Option<&str>, line: usize, start: usize, end: usize) -> Self {
        SourceSpan { file: file.map(str::to_string), line, start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file.as_deref().unwrap_or("<input>"), self.line, self.start)?;
        if self.end > self.start {
            write!(f, "-{}", self.end)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// A second location involved in the error, e.g. an earlier conflicting
    /// declaration.
    pub related: Option<SourceSpan>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into(), related: None }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if let Some(related) = &self.related {
            write!(f, " (see {related})")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Constants that can be written without quotes.
pub(crate) fn is_bare_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn quote(s: &str) -> String {
    if is_bare_word(s) {
        s.to_string()
    } else {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for c in s.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        out
    }
}
