//! Tokenizer shared by the Turtle and SPARQL parsers. The two grammars agree
//! on IRIs, prefixed names, literals, blank-node labels and comments.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    IriRef(String),
    PName {
        prefix: String,
        local: String,
    },
    BNode(String),
    Var(String),
    Str(String),
    Integer(String),
    Decimal(String),
    Double(String),
    /// `@prefix`, `@base` or a language tag.
    At(String),
    /// Bare word: `a`, keywords, `true`, function names.
    Word(String),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::IriRef(s) => write!(f, "<{s}>"),
            Tok::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Tok::BNode(s) => write!(f, "_:{s}"),
            Tok::Var(s) => write!(f, "?{s}"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Integer(s) | Tok::Decimal(s) | Tok::Double(s) => f.write_str(s),
            Tok::At(s) => write!(f, "@{s}"),
            Tok::Word(s) => f.write_str(s),
            Tok::Punct(p) => f.write_str(p),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for SyntaxError {}

const PUNCT2: [&str; 6] = ["^^", "&&", "||", "!=", "<=", ">="];
const PUNCT1: [&str; 18] = [
    "{", "}", "(", ")", "[", "]", ".", ";", ",", "/", "=", "*", "!", ">", "<", "+", "-", "|",
];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        skip_trivia(&mut cur);
        let (line, col) = (cur.line, cur.col);
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                line,
                col,
            });
            return Ok(out);
        };
        let tok = match c {
            '<' => match iri_ref(&mut cur)? {
                Some(iri) => Tok::IriRef(iri),
                None => punct(&mut cur),
            },
            '"' | '\'' => Tok::Str(string(&mut cur)?),
            '?' | '$' if cur.peek_at(1).is_some_and(is_name_char) => {
                cur.bump();
                Tok::Var(take_while(&mut cur, is_name_char))
            }
            '_' if cur.peek_at(1) == Some(':') => {
                cur.bump();
                cur.bump();
                let label = local_name(&mut cur)?;
                if label.is_empty() {
                    return Err(cur.error("empty blank node label"));
                }
                Tok::BNode(label)
            }
            '@' => {
                cur.bump();
                let word = take_while(&mut cur, |c| c.is_ascii_alphanumeric() || c == '-');
                if word.is_empty() {
                    return Err(cur.error("expected keyword or language tag after '@'"));
                }
                Tok::At(word)
            }
            ':' => {
                cur.bump();
                Tok::PName {
                    prefix: String::new(),
                    local: local_name(&mut cur)?,
                }
            }
            c if c.is_ascii_digit()
                || (c == '.' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
                || (matches!(c, '+' | '-')
                    && (cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())
                        || (cur.peek_at(1) == Some('.')
                            && cur.peek_at(2).is_some_and(|d| d.is_ascii_digit())))) =>
            {
                number(&mut cur)
            }
            c if is_name_start(c) => {
                let word = take_while(&mut cur, |c| is_name_char(c) || c == '.');
                // A name may contain '.' but not end with one.
                let trimmed = word.trim_end_matches('.');
                let extra = word.len() - trimmed.len();
                let word = trimmed.to_owned();
                if extra > 0 {
                    // give the dots back
                    cur.pos -= extra;
                    cur.col -= extra;
                }
                if cur.peek() == Some(':') {
                    cur.bump();
                    Tok::PName {
                        prefix: word,
                        local: local_name(&mut cur)?,
                    }
                } else {
                    Tok::Word(word)
                }
            }
            _ => punct(&mut cur),
        };
        if matches!(tok, Tok::Punct("")) {
            return Err(cur.error(format!("unexpected character {c:?}")));
        }
        out.push(Token { tok, line, col });
    }
}

fn skip_trivia(cur: &mut Cursor<'_>) {
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
        } else if c == '#' {
            while let Some(c) = cur.bump() {
                if c == '\n' {
                    break;
                }
            }
        } else {
            break;
        }
    }
}

fn take_while(cur: &mut Cursor<'_>, pred: impl Fn(char) -> bool) -> String {
    let start = cur.pos;
    while cur.peek().is_some_and(&pred) {
        cur.bump();
    }
    cur.src[start..cur.pos].to_owned()
}

fn punct(cur: &mut Cursor<'_>) -> Tok {
    for p in PUNCT2 {
        if cur.rest().starts_with(p) {
            cur.bump();
            cur.bump();
            return Tok::Punct(p);
        }
    }
    for p in PUNCT1 {
        if cur.rest().starts_with(p) {
            cur.bump();
            return Tok::Punct(p);
        }
    }
    Tok::Punct("")
}

/// Reads `<...>`. Returns `None` (consuming nothing) when the text after `<`
/// cannot be an IRI, so that `<` can be read as an operator.
fn iri_ref(cur: &mut Cursor<'_>) -> Result<Option<String>, SyntaxError> {
    let body = &cur.rest()[1..];
    let end = body.find(|c: char| c == '>' || c.is_whitespace() || c == '<' || c == '"');
    match end {
        Some(i) if body.as_bytes()[i] == b'>' => {}
        _ => return Ok(None),
    }
    cur.bump();
    let mut out = String::new();
    loop {
        match cur.bump() {
            Some('>') => return Ok(Some(out)),
            Some('\\') => out.push(unicode_escape(cur)?),
            Some(c) => out.push(c),
            None => return Err(cur.error("unterminated IRI")),
        }
    }
}

fn unicode_escape(cur: &mut Cursor<'_>) -> Result<char, SyntaxError> {
    let len = match cur.bump() {
        Some('u') => 4,
        Some('U') => 8,
        _ => return Err(cur.error("invalid escape in IRI")),
    };
    let mut hex = String::new();
    for _ in 0..len {
        match cur.bump() {
            Some(c) if c.is_ascii_hexdigit() => hex.push(c),
            _ => return Err(cur.error("invalid unicode escape")),
        }
    }
    u32::from_str_radix(&hex, 16)
        .ok()
        .and_then(char::from_u32)
        .ok_or_else(|| cur.error("invalid unicode code point"))
}

fn local_name(cur: &mut Cursor<'_>) -> Result<String, SyntaxError> {
    let mut out = String::new();
    let mut raw_len = Vec::new();
    while let Some(c) = cur.peek() {
        let first = out.is_empty();
        if c == '\\' {
            cur.bump();
            match cur.bump() {
                Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => out.push(e),
                _ => return Err(cur.error("invalid escape in local name")),
            }
            raw_len.push(false);
        } else if c == '%' {
            let hex: String = cur.rest().chars().skip(1).take(2).collect();
            if hex.len() != 2 || !hex.chars().all(|h| h.is_ascii_hexdigit()) {
                return Err(cur.error("invalid percent escape in local name"));
            }
            for _ in 0..3 {
                out.push(cur.bump().unwrap());
            }
            raw_len.push(false);
        } else if is_name_char(c) || c == ':' || (c == '.' && !first) {
            if first && c == '-' {
                break;
            }
            out.push(cur.bump().unwrap());
            raw_len.push(c == '.');
        } else {
            break;
        }
    }
    // trailing dots belong to the statement terminator
    while out.ends_with('.') && raw_len.last() == Some(&true) {
        out.pop();
        raw_len.pop();
        cur.pos -= 1;
        cur.col -= 1;
    }
    Ok(out)
}

fn number(cur: &mut Cursor<'_>) -> Tok {
    let start = cur.pos;
    if matches!(cur.peek(), Some('+' | '-')) {
        cur.bump();
    }
    take_while(cur, |c| c.is_ascii_digit());
    let mut decimal = false;
    if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
        cur.bump();
        take_while(cur, |c| c.is_ascii_digit());
        decimal = true;
    }
    let mut double = false;
    if matches!(cur.peek(), Some('e' | 'E')) {
        let sign = usize::from(matches!(cur.peek_at(1), Some('+' | '-')));
        if cur.peek_at(1 + sign).is_some_and(|d| d.is_ascii_digit()) {
            for _ in 0..=sign {
                cur.bump();
            }
            take_while(cur, |c| c.is_ascii_digit());
            double = true;
        }
    }
    let text = cur.src[start..cur.pos].to_owned();
    if double {
        Tok::Double(text)
    } else if decimal {
        Tok::Decimal(text)
    } else {
        Tok::Integer(text)
    }
}

fn string(cur: &mut Cursor<'_>) -> Result<String, SyntaxError> {
    let quote = cur.bump().unwrap();
    let long = cur.peek() == Some(quote) && cur.peek_at(1) == Some(quote);
    if long {
        cur.bump();
        cur.bump();
    } else if cur.peek() == Some(quote) {
        cur.bump();
        return Ok(String::new());
    }
    let mut out = String::new();
    loop {
        let Some(c) = cur.bump() else {
            return Err(cur.error("unterminated string literal"));
        };
        match c {
            '\\' => {
                let e = match cur.bump() {
                    Some('t') => '\t',
                    Some('b') => '\u{8}',
                    Some('n') => '\n',
                    Some('r') => '\r',
                    Some('f') => '\u{c}',
                    Some('"') => '"',
                    Some('\'') => '\'',
                    Some('\\') => '\\',
                    Some('u') | Some('U') => {
                        cur.pos -= 1;
                        cur.col -= 1;
                        unicode_escape(cur)?
                    }
                    _ => return Err(cur.error("invalid escape in string literal")),
                };
                out.push(e);
            }
            c if c == quote => {
                if !long {
                    return Ok(out);
                }
                if cur.peek() == Some(quote) && cur.peek_at(1) == Some(quote) {
                    cur.bump();
                    cur.bump();
                    return Ok(out);
                }
                out.push(c);
            }
            '\n' | '\r' if !long => return Err(cur.error("newline in string literal")),
            c => out.push(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    fn pname(p: &str, l: &str) -> Tok {
        Tok::PName {
            prefix: p.into(),
            local: l.into(),
        }
    }

    #[test]
    fn statement_dot_not_part_of_local_name() {
        assert_eq!(
            toks(":DE_KN_grid seas:isPoweredBy :x."),
            vec![
                pname("", "DE_KN_grid"),
                pname("seas", "isPoweredBy"),
                pname("", "x"),
                Tok::Punct("."),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn sequence_path_and_comments() {
        assert_eq!(
            toks("sosa:hasResult/qudt:numericValue ?maxTprt ; #maximum temperature\n"),
            vec![
                pname("sosa", "hasResult"),
                Tok::Punct("/"),
                pname("qudt", "numericValue"),
                Tok::Var("maxTprt".into()),
                Tok::Punct(";"),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn iri_with_colon_in_path() {
        assert_eq!(
            toks("<resource/station/GHCND:GME00102404>"),
            vec![
                Tok::IriRef("resource/station/GHCND:GME00102404".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn less_than_is_an_operator_when_not_an_iri() {
        assert_eq!(
            toks("?a < 3"),
            vec![
                Tok::Var("a".into()),
                Tok::Punct("<"),
                Tok::Integer("3".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn literals() {
        assert_eq!(
            toks(r#""a\"b"^^xsd:string 12 -1.5 .5 1e3 'x' """l"o""""#),
            vec![
                Tok::Str("a\"b".into()),
                Tok::Punct("^^"),
                pname("xsd", "string"),
                Tok::Integer("12".into()),
                Tok::Decimal("-1.5".into()),
                Tok::Decimal(".5".into()),
                Tok::Double("1e3".into()),
                Tok::Str("x".into()),
                Tok::Str("l\"o".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!((t[1].line, t[1].col), (2, 3));
    }

    #[test]
    fn unterminated_string_errors() {
        let e = tokenize("\"abc").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
