use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Turnstile => "`:-`".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub(crate) tok: Tok,
    pub(crate) span: SourceSpan,
}

/// Splits text into tokens. `%` and `#` start comments running to the end
/// of the line.
pub(crate) fn tokenize(text: &str, file: Option<&str>) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let span = |end: usize| SourceSpan::new(file, line_no, col, end);
            match c {
                _ if c.is_whitespace() => i += 1,
                '%' | '#' => break,
                '(' | ')' | ',' | '.' => {
                    let tok = match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        _ => Tok::Dot,
                    };
                    out.push(Token { tok, span: span(col) });
                    i += 1;
                }
                ':' => {
                    if chars.get(i + 1) == Some(&'-') {
                        out.push(Token { tok: Tok::Turnstile, span: span(col + 1) });
                        i += 2;
                    } else {
                        return Err(ParseError::new(span(col), "expected `:-`"));
                    }
                }
                '"' => {
                    let mut value = String::new();
                    let mut j = i + 1;
                    loop {
                        match chars.get(j) {
                            None => return Err(ParseError::new(span(j), "unterminated string")),
                            Some('"') => break,
                            Some('\\') => {
                                match chars.get(j + 1) {
                                    Some(&e) => value.push(e),
                                    None => return Err(ParseError::new(span(j + 1), "unterminated string")),
                                }
                                j += 2;
                            }
                            Some(&other) => {
                                value.push(other);
                                j += 1;
                            }
                        }
                    }
                    out.push(Token { tok: Tok::Str(value), span: span(j + 1) });
                    i = j + 1;
                }
                _ if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    out.push(Token { tok: Tok::Word(chars[i..j].iter().collect()), span: span(j) });
                    i = j;
                }
                _ => return Err(ParseError::new(span(col), format!("unexpected character `{c}`"))),
            }
        }
    }
    Ok(out)
}

/// Cursor over a token list with end-of-input reporting.
pub(crate) struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    eof: SourceSpan,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(tokens: &'a [Token], text: &str, file: Option<&str>) -> Self {
        let lines = text.lines().count().max(1);
        let last_len = text.lines().last().map_or(0, |l| l.chars().count());
        Cursor { tokens, pos: 0, eof: SourceSpan::new(file, lines, last_len + 1, last_len + 1) }
    }

    pub(crate) fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub(crate) fn next(&mut self, expected: &str) -> Result<&'a Token, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(ParseError::new(self.eof.clone(), format!("expected {expected}, found end of input"))),
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<&'a Token, ParseError> {
        let want = tok.describe();
        let t = self.next(&want)?;
        if t.tok == tok {
            Ok(t)
        } else {
            Err(ParseError::new(t.span.clone(), format!("expected {want}, found {}", t.tok.describe())))
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}
