//! Turtle subset: `@base`/`@prefix` (and their SPARQL-style forms), prefixed
//! names, `a`, predicate (`;`) and object (`,`) lists, typed and numeric
//! literals, booleans, comments and blank-node labels. Collections and `[...]`
//! blank nodes are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::dataset::Dataset;
use super::iri::resolve_iri;
use super::lex::{tokenize, SyntaxError, Tok, Token};
use super::prefix::PrefixMap;
use super::term::{BlankNode, GraphName, Iri, Literal, Quad, Subject, Term};
use super::vocab::{rdf, xsd};
use super::RdfError;

#[derive(Clone, Debug)]
pub struct TurtleDocument {
    pub quads: Vec<Quad>,
    pub prefixes: PrefixMap,
}

/// Parses `text`, placing every triple in `graph`.
pub fn parse_turtle(
    text: &str,
    base: Option<&Iri>,
    graph: &GraphName,
) -> Result<TurtleDocument, RdfError> {
    let tokens = tokenize(text).map_err(RdfError::Syntax)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefixes: PrefixMap::new(),
        graph: graph.clone(),
        quads: Vec::new(),
    };
    parser.prefixes.set_base(base.cloned());
    parser.document()?;
    Ok(TurtleDocument {
        quads: parser.quads,
        prefixes: parser.prefixes,
    })
}

/// Parses `text` and adds its triples to `dataset`.
pub fn load_turtle(
    dataset: &mut Dataset,
    text: &str,
    base: Option<&Iri>,
    graph: &GraphName,
) -> Result<PrefixMap, RdfError> {
    let doc = parse_turtle(text, base, graph)?;
    dataset.extend(&doc.quads);
    Ok(doc.prefixes)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: PrefixMap,
    graph: GraphName,
    quads: Vec<Quad>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, token: &Token, message: impl Into<String>) -> RdfError {
        RdfError::Syntax(SyntaxError {
            line: token.line,
            col: token.col,
            message: message.into(),
        })
    }

    fn located(token: &Token, err: RdfError) -> RdfError {
        match err {
            e @ (RdfError::Syntax(_) | RdfError::Located { .. }) => e,
            e => RdfError::Located {
                line: token.line,
                col: token.col,
                source: Box::new(e),
            },
        }
    }

    fn expect(&mut self, punct: &'static str) -> Result<(), RdfError> {
        let t = self.next();
        if t.tok == Tok::Punct(punct) {
            Ok(())
        } else {
            Err(self.error_at(&t, format!("expected '{punct}', found {}", t.tok)))
        }
    }

    fn document(&mut self) -> Result<(), RdfError> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::At(kw) if kw == "prefix" => {
                    self.next();
                    self.prefix_decl()?;
                    self.expect(".")?;
                }
                Tok::At(kw) if kw == "base" => {
                    self.next();
                    self.base_decl()?;
                    self.expect(".")?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                    self.next();
                    self.prefix_decl()?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("base") => {
                    self.next();
                    self.base_decl()?;
                }
                _ => {
                    self.triples()?;
                    self.expect(".")?;
                }
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        let t = self.next();
        let Tok::PName { prefix, local } = &t.tok else {
            return Err(self.error_at(&t, format!("expected prefix label, found {}", t.tok)));
        };
        if !local.is_empty() {
            return Err(self.error_at(&t, "prefix label must end with ':'"));
        }
        let prefix = prefix.clone();
        let ns = self.iri_ref()?;
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), RdfError> {
        let base = self.iri_ref()?;
        self.prefixes.set_base(Some(base));
        Ok(())
    }

    fn iri_ref(&mut self) -> Result<Iri, RdfError> {
        let t = self.next();
        match &t.tok {
            Tok::IriRef(r) => self.resolve(&t, r),
            other => Err(self.error_at(&t, format!("expected IRI, found {other}"))),
        }
    }

    fn resolve(&self, at: &Token, reference: &str) -> Result<Iri, RdfError> {
        let result = match self.prefixes.base() {
            Some(base) => resolve_iri(base, reference),
            None => Iri::new(reference),
        };
        result.map_err(|e| Self::located(at, e))
    }

    fn iri(&mut self) -> Result<Option<Iri>, RdfError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::IriRef(r) => {
                self.next();
                self.resolve(&t, r).map(Some)
            }
            Tok::PName { prefix, local } => {
                self.next();
                self.prefixes
                    .expand(prefix, local)
                    .map(Some)
                    .map_err(|e| Self::located(&t, e))
            }
            _ => Ok(None),
        }
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        let t = self.peek().clone();
        let subject: Subject = match &t.tok {
            Tok::BNode(label) => {
                self.next();
                BlankNode::new(label.clone()).into()
            }
            Tok::Punct("[") | Tok::Punct("(") => {
                return Err(self.error_at(
                    &t,
                    "blank node property lists and collections are not supported",
                ))
            }
            _ => match self.iri()? {
                Some(iri) => iri.into(),
                None => return Err(self.error_at(&t, format!("expected subject, found {}", t.tok))),
            },
        };
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Subject) -> Result<(), RdfError> {
        loop {
            let t = self.peek().clone();
            let predicate = match &t.tok {
                Tok::Word(w) if w == "a" => {
                    self.next();
                    Iri::new_unchecked(rdf::TYPE)
                }
                _ => match self.iri()? {
                    Some(iri) => iri,
                    None => {
                        return Err(
                            self.error_at(&t, format!("expected predicate, found {}", t.tok))
                        )
                    }
                },
            };
            loop {
                let object = self.object()?;
                self.quads.push(Quad::new(
                    subject.clone(),
                    predicate.clone(),
                    object,
                    self.graph.clone(),
                ));
                if self.peek().tok == Tok::Punct(",") {
                    self.next();
                } else {
                    break;
                }
            }
            if self.peek().tok != Tok::Punct(";") {
                return Ok(());
            }
            while self.peek().tok == Tok::Punct(";") {
                self.next();
            }
            // a trailing ';' before '.' is allowed
            if matches!(self.peek().tok, Tok::Punct(".") | Tok::Punct("]")) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        let t = self.peek().clone();
        let literal =
            |lex: &str, dt: &str| Literal::typed(lex, Iri::new_unchecked(dt)).map(Term::Literal);
        let term = match &t.tok {
            Tok::BNode(label) => {
                self.next();
                Term::BlankNode(BlankNode::new(label.clone()))
            }
            Tok::Integer(n) => {
                self.next();
                literal(n, xsd::INTEGER)?
            }
            Tok::Decimal(n) => {
                self.next();
                literal(n, xsd::DECIMAL)?
            }
            Tok::Double(n) => {
                self.next();
                literal(n, xsd::DOUBLE)?
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.next();
                literal(w, xsd::BOOLEAN)?
            }
            Tok::Str(s) => {
                self.next();
                let s = s.clone();
                match &self.peek().tok {
                    Tok::Punct("^^") => {
                        self.next();
                        let dt_tok = self.peek().clone();
                        let Some(dt) = self.iri()? else {
                            return Err(self.error_at(&dt_tok, "expected datatype IRI after '^^'"));
                        };
                        Term::Literal(Literal::typed(s, dt).map_err(|e| Self::located(&t, e))?)
                    }
                    Tok::At(_) => {
                        let at = self.peek().clone();
                        return Err(
                            self.error_at(&at, "language-tagged literals are not supported")
                        );
                    }
                    _ => Term::Literal(Literal::string(s)),
                }
            }
            Tok::Punct("[") | Tok::Punct("(") => {
                return Err(self.error_at(
                    &t,
                    "blank node property lists and collections are not supported",
                ))
            }
            _ => match self.iri()? {
                Some(iri) => Term::Iri(iri),
                None => return Err(self.error_at(&t, format!("expected object, found {}", t.tok))),
            },
        };
        Ok(term)
    }
}

/// Writes one graph of `dataset` as Turtle.
///
/// Output is deterministic: header lines in prefix-map order, subjects in
/// canonical order, `rdf:type` first then predicates by IRI, objects in
/// canonical order.
pub fn serialize_turtle(dataset: &Dataset, graph: &GraphName, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    if let Some(base) = prefixes.base() {
        writeln!(out, "@base <{}> .", base.as_str()).unwrap();
    }
    for (p, ns) in prefixes.iter() {
        writeln!(out, "@prefix {p}: <{}> .", ns.as_str()).unwrap();
    }

    let mut subjects: BTreeMap<&Subject, BTreeMap<(bool, &Iri), Vec<&Term>>> = BTreeMap::new();
    let quads = dataset.graph_quads(graph);
    for q in &quads {
        subjects
            .entry(&q.subject)
            .or_default()
            .entry((q.predicate.as_str() != rdf::TYPE, &q.predicate))
            .or_default()
            .push(&q.object);
    }

    for (subject, predicates) in subjects {
        out.push('\n');
        let s = match subject {
            Subject::Iri(iri) => fmt_iri(iri, prefixes),
            Subject::BlankNode(b) => b.to_string(),
        };
        out.push_str(&s);
        let n = predicates.len();
        for (i, ((_, predicate), objects)) in predicates.into_iter().enumerate() {
            let p = if predicate.as_str() == rdf::TYPE {
                "a".to_owned()
            } else {
                fmt_iri(predicate, prefixes)
            };
            let objects: Vec<String> = objects.iter().map(|o| fmt_term(o, prefixes)).collect();
            let end = if i + 1 == n { " ." } else { " ;" };
            write!(out, "\n    {p} {}{end}", objects.join(", ")).unwrap();
        }
        out.push('\n');
    }
    out
}

pub(crate) fn fmt_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => fmt_iri(iri, prefixes),
        Term::BlankNode(b) => b.to_string(),
        Term::Literal(l) => {
            let mut s = format!("\"{}\"", super::term::escape_string(l.lexical()));
            if l.datatype().as_str() != xsd::STRING {
                s.push_str("^^");
                s.push_str(&fmt_iri(l.datatype(), prefixes));
            }
            s
        }
    }
}

fn fmt_iri(iri: &Iri, prefixes: &PrefixMap) -> String {
    if let Some(pname) = prefixes.compact(iri) {
        return pname;
    }
    if let Some(base) = prefixes.base() {
        if let Some(rel) = relative_to(base, iri) {
            return format!("<{rel}>");
        }
    }
    format!("<{}>", iri.as_str())
}

fn relative_to<'a>(base: &Iri, iri: &'a Iri) -> Option<&'a str> {
    let rel = iri.as_str().strip_prefix(base.as_str())?;
    let first_segment = rel.split('/').next().unwrap_or("");
    let plain = !rel.is_empty()
        && !rel.starts_with('/')
        && !first_segment.contains(':')
        && rel.split('/').all(|seg| seg != "." && seg != "..")
        && rel
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "_-/:.~".contains(c));
    (plain && resolve_iri(base, rel).is_ok_and(|r| r == *iri)).then_some(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<TurtleDocument, RdfError> {
        parse_turtle(text, None, &GraphName::Default)
    }

    #[test]
    fn missing_object_is_a_syntax_error() {
        let text = "@prefix x: <http://x/> .\nx:y x:z";
        match parse(text).unwrap_err() {
            RdfError::Syntax(e) => assert_eq!((e.line, e.col), (2, 8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undefined_prefix_names_the_prefix() {
        let err = parse("foo:a foo:b foo:c .").unwrap_err();
        assert!(
            matches!(err.root(), RdfError::UndefinedPrefix(p) if p == "foo"),
            "{err}"
        );
        assert!(err.to_string().contains("foo"));
    }

    #[test]
    fn lists_literals_and_comments() {
        let doc = parse(
            r#"@prefix x: <http://x/> . # comment
            PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>
            x:s a x:C, x:D ; x:n 12, 1.5, "2016-05-01T00:00:00Z"^^xsd:dateTime ;
                x:b _:b1 ; .
            _:b1 x:flag true ."#,
        )
        .unwrap();
        assert_eq!(doc.quads.len(), 7);
        let dt = doc.quads.iter().find_map(|q| match &q.object {
            Term::Literal(l) if l.as_date_time().is_some() => Some(l.clone()),
            _ => None,
        });
        assert!(dt.is_some());
    }

    #[test]
    fn relative_iri_without_base_errors() {
        assert!(parse("<a> <b> <c> .").is_err());
        let base = Iri::new("http://a/b/").unwrap();
        let doc = parse_turtle("<a> <b> <c> .", Some(&base), &GraphName::Default).unwrap();
        assert_eq!(
            doc.quads[0].subject,
            Subject::Iri(Iri::new("http://a/b/a").unwrap())
        );
    }

    #[test]
    fn language_tags_and_collections_rejected() {
        assert!(parse("<http://a> <http://b> \"x\"@en .").is_err());
        assert!(parse("<http://a> <http://b> ( <http://c> ) .").is_err());
        assert!(parse("[ <http://b> <http://c> ] <http://b> <http://c> .").is_err());
    }

    #[test]
    fn ill_typed_numeric_literal_rejected() {
        let err = parse("@prefix xsd: <http://www.w3.org/2001/XMLSchema#> . <http://a> <http://b> \"x\"^^xsd:decimal .")
            .unwrap_err();
        assert!(matches!(err.root(), RdfError::InvalidLiteral { .. }));
    }

    #[test]
    fn empty_graph_serializes_to_header_only() {
        let ds = Dataset::new();
        let prefixes = PrefixMap::standard(Some(Iri::new("http://base/").unwrap()));
        let out = serialize_turtle(&ds, &GraphName::Default, &prefixes);
        assert!(out
            .lines()
            .all(|l| l.starts_with("@base") || l.starts_with("@prefix")));
        assert_eq!(out.lines().count(), 7);
    }

    #[test]
    fn date_time_literal_is_typed_on_output() {
        let mut ds = Dataset::new();
        let t = crate::rdf::parse_date_time("2016-05-01T00:00:00Z").unwrap();
        ds.insert(&Quad::new(
            Iri::new("http://a/s").unwrap(),
            Iri::new("http://a/p").unwrap(),
            Literal::date_time(t),
            GraphName::Default,
        ));
        let out = serialize_turtle(&ds, &GraphName::Default, &PrefixMap::standard(None));
        assert!(
            out.contains("\"2016-05-01T00:00:00Z\"^^xsd:dateTime"),
            "{out}"
        );
        let back = parse(&out).unwrap();
        assert_eq!(back.quads, ds.quads());
    }

    #[test]
    fn base_relative_output_resolves_back() {
        let base = Iri::new("http://jresearch.ucd.ie/climate-kg/").unwrap();
        let station =
            Iri::new("http://jresearch.ucd.ie/climate-kg/resource/station/GHCND:GME00102404")
                .unwrap();
        assert_eq!(
            relative_to(&base, &station),
            Some("resource/station/GHCND:GME00102404")
        );
        let odd = Iri::new("http://jresearch.ucd.ie/climate-kg/a:b/c").unwrap();
        assert_eq!(relative_to(&base, &odd), None);
    }
}
