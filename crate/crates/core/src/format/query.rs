use std::collections::HashSet;

use super::lexer::{tokenize, Cursor, Tok};
use super::{is_identifier, ParseError};
use crate::query::{Query, QueryBuilder};

/// Parses `ans(x̄) :- A1(..), ..., An(..).`
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    parse_query_in(text, None)
}

/// Like [`parse_query`], attributing diagnostics to `file`.
pub fn parse_query_in(text: &str, file: Option<&str>) -> Result<Query, ParseError> {
    let tokens = tokenize(text, file)?;
    let mut cur = Cursor::new(&tokens, text, file);

    let head = identifier(&mut cur, "head predicate")?;
    let head_vars = arguments(&mut cur)?;
    cur.expect(Tok::Turnstile)?;

    let mut builder = QueryBuilder::new(&head.0);
    loop {
        let (predicate, span) = identifier(&mut cur, "atom")?;
        let args = arguments(&mut cur)?;
        if args.is_empty() {
            return Err(ParseError::new(span, format!("atom `{predicate}` has no arguments")));
        }
        builder.atom(&predicate, args.iter().map(|(a, _)| a.as_str()));
        if cur.eat(&Tok::Comma) {
            continue;
        }
        cur.expect(Tok::Dot)?;
        break;
    }
    if let Some(t) = cur.peek() {
        return Err(ParseError::new(t.span.clone(), format!("unexpected {} after the query", t.tok.describe())));
    }

    let mut seen = HashSet::new();
    for (name, span) in &head_vars {
        if !seen.insert(name) {
            return Err(ParseError::new(span.clone(), format!("head variable `{name}` listed twice")));
        }
    }
    builder
        .free(head_vars.iter().map(|(a, _)| a.as_str()))
        .expect("duplicates were rejected above");
    Ok(builder.finish())
}

fn identifier(cur: &mut Cursor<'_>, what: &str) -> Result<(String, super::SourceSpan), ParseError> {
    let t = cur.next(what)?;
    match &t.tok {
        Tok::Word(w) if is_identifier(w) => Ok((w.clone(), t.span.clone())),
        other => Err(ParseError::new(t.span.clone(), format!("expected {what} name, found {}", other.describe()))),
    }
}

fn arguments(cur: &mut Cursor<'_>) -> Result<Vec<(String, super::SourceSpan)>, ParseError> {
    cur.expect(Tok::LParen)?;
    let mut args = Vec::new();
    if cur.eat(&Tok::RParen) {
        return Ok(args);
    }
    loop {
        args.push(identifier(cur, "variable")?);
        if cur.eat(&Tok::Comma) {
            continue;
        }
        cur.expect(Tok::RParen)?;
        return Ok(args);
    }
}

/// Renders a query in the syntax accepted by [`parse_query`].
pub fn write_query(q: &Query) -> String {
    format!("{q}\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::EXAMPLE_QUERY;

    #[test]
    fn simple_query() {
        let q = parse_query("ans(y1,y2) :- E1(y1,z), E2(y2,z).").unwrap();
        assert_eq!(q.free.iter().map(|&v| q.var_name(v)).collect::<Vec<_>>(), ["y1", "y2"]);
        assert_eq!(q.vars.len() - q.free.len(), 1);
        assert_eq!(q.atoms.len(), 2);
    }

    #[test]
    fn boolean_query() {
        let q = parse_query("ans() :- R(x).").unwrap();
        assert!(q.is_boolean());
    }

    #[test]
    fn example_query_shape() {
        let q = parse_query(EXAMPLE_QUERY).unwrap();
        assert_eq!(q.atoms.len(), 8);
        assert_eq!(q.free.len(), 9);
        assert_eq!(q.vars.len(), 17);
    }

    #[test]
    fn round_trip() {
        let q = parse_query(EXAMPLE_QUERY).unwrap();
        assert_eq!(parse_query(&write_query(&q)).unwrap(), q);
    }

    #[test]
    fn errors_carry_spans() {
        let err = parse_query_in("ans(x) :- R(x)", Some("a.cq")).unwrap_err();
        assert!(err.message.contains("end of input"), "{err}");
        assert_eq!(err.span.file.as_deref(), Some("a.cq"));
        let err = parse_query("ans(x,x) :- R(x).").unwrap_err();
        assert_eq!(err.span.start, 7);
        let err = parse_query("ans(x) :- R().").unwrap_err();
        assert!(err.message.contains("no arguments"));
        let err = parse_query("ans(1x) :- R(x).").unwrap_err();
        assert!(err.message.contains("variable"));
        let err = parse_query("ans(x) :- R(x). S(x).").unwrap_err();
        assert!(err.message.contains("after the query"));
    }
}
