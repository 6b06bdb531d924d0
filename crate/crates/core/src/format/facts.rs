use std::collections::HashMap;

use super::lexer::{tokenize, Cursor, Tok};
use super::{is_identifier, quote, ParseError, SourceSpan};
use crate::engine::Structure;

/// Parses lines of facts `P(a,b,"c d").` into a structure.
pub fn parse_facts(text: &str) -> Result<Structure, ParseError> {
    parse_facts_in(text, None)
}

pub fn parse_facts_in(text: &str, file: Option<&str>) -> Result<Structure, ParseError> {
    let tokens = tokenize(text, file)?;
    let mut cur = Cursor::new(&tokens, text, file);
    let mut structure = Structure::new();
    let mut declared: HashMap<String, (usize, SourceSpan)> = HashMap::new();

    while !cur.at_end() {
        let t = cur.next("predicate")?;
        let predicate = match &t.tok {
            Tok::Word(w) if is_identifier(w) => w.clone(),
            other => return Err(ParseError::new(t.span.clone(), format!("expected predicate name, found {}", other.describe()))),
        };
        let start = t.span.clone();
        cur.expect(Tok::LParen)?;
        let mut args: Vec<String> = Vec::new();
        if !cur.eat(&Tok::RParen) {
            loop {
                let t = cur.next("constant")?;
                match &t.tok {
                    Tok::Word(w) | Tok::Str(w) => args.push(w.clone()),
                    other => return Err(ParseError::new(t.span.clone(), format!("expected constant, found {}", other.describe()))),
                }
                if cur.eat(&Tok::Comma) {
                    continue;
                }
                cur.expect(Tok::RParen)?;
                break;
            }
        }
        let end = cur.expect(Tok::Dot)?;
        let span = SourceSpan { end: end.span.end, ..start };

        match declared.get(&predicate) {
            Some((arity, first)) if *arity != args.len() => {
                let mut err = ParseError::new(
                    span,
                    format!("`{predicate}` has arity {} here but arity {arity} earlier", args.len()),
                );
                err.related = Some(first.clone());
                return Err(err);
            }
            Some(_) => {}
            None => {
                declared.insert(predicate.clone(), (args.len(), span));
            }
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        structure.add_fact(&predicate, &refs).expect("arity checked above");
    }
    Ok(structure)
}

/// Renders a structure as facts, one per line, grouped by predicate.
pub fn write_facts(structure: &Structure) -> String {
    let mut out = String::new();
    for (name, table) in structure.tables() {
        for row in &table.rows {
            let args: Vec<String> = row.iter().map(|&v| quote(structure.value(v))).collect();
            out.push_str(&format!("{name}({}).\n", args.join(",")));
        }
    }
    out
}
