use crate::rdf::lex::{tokenize, Tok, Token};
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{resolve_iri, Iri, Literal, PrefixMap, SyntaxError, Term};

use super::ast::*;
use super::QueryError;

/// Keywords outside the supported subset. Reported by name.
const UNSUPPORTED: [&str; 24] = [
    "OPTIONAL",
    "UNION",
    "MINUS",
    "BIND",
    "VALUES",
    "SERVICE",
    "ORDER",
    "GROUP",
    "HAVING",
    "OFFSET",
    "DISTINCT",
    "REDUCED",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "INSERT",
    "DELETE",
    "LOAD",
    "CLEAR",
    "DROP",
    "CREATE",
    "EXISTS",
    "NOT",
    "AS",
];

pub fn parse_query(text: &str) -> Result<SelectQuery, QueryError> {
    let tokens = tokenize(text).map_err(QueryError::Syntax)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        prefixes: PrefixMap::new(),
    };
    p.query()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: PrefixMap,
}

enum Element {
    Pattern(GraphPattern),
    Filter(Expression),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn syntax(t: &Token, message: impl Into<String>) -> QueryError {
        QueryError::Syntax(SyntaxError {
            line: t.line,
            col: t.col,
            message: message.into(),
        })
    }

    fn unsupported(t: &Token, feature: impl Into<String>) -> QueryError {
        QueryError::Unsupported {
            feature: feature.into(),
            line: t.line,
            col: t.col,
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        let hit = self.is_keyword(kw);
        if hit {
            self.next();
        }
        hit
    }

    /// Fails with an unsupported-feature error if the next token is a keyword
    /// outside the subset.
    fn reject_unsupported(&self) -> Result<(), QueryError> {
        let t = self.peek();
        if let Tok::Word(w) = &t.tok {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                return Err(Self::unsupported(t, upper));
            }
        }
        Ok(())
    }

    fn expect(&mut self, punct: &'static str) -> Result<(), QueryError> {
        let t = self.next();
        if t.tok == Tok::Punct(punct) {
            Ok(())
        } else {
            Err(Self::syntax(
                &t,
                format!("expected '{punct}', found {}", t.tok),
            ))
        }
    }

    fn query(&mut self) -> Result<SelectQuery, QueryError> {
        let mut base = None;
        loop {
            if self.eat_keyword("BASE") {
                let iri = self.iri_ref()?;
                self.prefixes.set_base(Some(iri.clone()));
                base = Some(iri);
            } else if self.eat_keyword("PREFIX") {
                let t = self.next();
                let Tok::PName { prefix, local } = &t.tok else {
                    return Err(Self::syntax(
                        &t,
                        format!("expected prefix label, found {}", t.tok),
                    ));
                };
                if !local.is_empty() {
                    return Err(Self::syntax(&t, "prefix label must end with ':'"));
                }
                let prefix = prefix.clone();
                let ns = self.iri_ref()?;
                self.prefixes.insert(prefix, ns);
            } else {
                break;
            }
        }

        self.reject_unsupported()?;
        let t = self.next();
        if !matches!(&t.tok, Tok::Word(w) if w.eq_ignore_ascii_case("SELECT")) {
            return Err(Self::syntax(
                &t,
                format!("expected SELECT, found {}", t.tok),
            ));
        }
        self.reject_unsupported()?;
        let mut projection = Vec::new();
        let star_tok = self.peek().clone();
        let star = if star_tok.tok == Tok::Punct("*") {
            self.next();
            true
        } else {
            while let Tok::Var(v) = &self.peek().tok {
                projection.push(Variable::new(v.clone()));
                self.next();
            }
            if projection.is_empty() {
                let t = self.peek();
                if t.tok == Tok::Punct("(") {
                    return Err(Self::unsupported(t, "projection expressions"));
                }
                return Err(Self::syntax(
                    t,
                    format!("expected variables or '*', found {}", t.tok),
                ));
            }
            false
        };

        let mut dataset = Vec::new();
        while self.eat_keyword("FROM") {
            let named = self.eat_keyword("NAMED");
            let iri = self.iri()?;
            dataset.push(if named {
                DatasetClause::Named(iri)
            } else {
                DatasetClause::Default(iri)
            });
        }

        self.eat_keyword("WHERE");
        let pattern = self.group()?;

        self.reject_unsupported()?;
        let mut limit = None;
        if self.eat_keyword("LIMIT") {
            let t = self.next();
            match &t.tok {
                Tok::Integer(n) if !n.starts_with(['-', '+']) => {
                    limit = Some(
                        n.parse()
                            .map_err(|_| Self::syntax(&t, "LIMIT out of range"))?,
                    );
                }
                _ => {
                    return Err(Self::syntax(
                        &t,
                        format!("expected non-negative integer, found {}", t.tok),
                    ))
                }
            }
        }
        self.reject_unsupported()?;
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return Err(Self::syntax(
                &t,
                format!("unexpected {} after query", t.tok),
            ));
        }

        let in_scope = pattern.variables();
        if star {
            projection = in_scope;
        } else if let Some(v) = projection.iter().find(|v| !in_scope.contains(v)) {
            return Err(QueryError::UnboundProjection(v.clone()));
        }

        Ok(SelectQuery {
            base,
            prefixes: self.prefixes.clone(),
            projection,
            dataset,
            pattern,
            limit,
        })
    }

    fn group(&mut self) -> Result<GraphPattern, QueryError> {
        self.expect("{")?;
        let mut elements = Vec::new();
        loop {
            self.reject_unsupported()?;
            let t = self.peek().clone();
            match &t.tok {
                Tok::Punct("}") => {
                    self.next();
                    break;
                }
                Tok::Punct(".") => {
                    self.next();
                }
                Tok::Punct("{") => {
                    let inner = self.group()?;
                    self.reject_unsupported()?;
                    elements.push(Element::Pattern(inner));
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("GRAPH") => {
                    self.next();
                    let name_tok = self.peek().clone();
                    if matches!(name_tok.tok, Tok::Var(_)) {
                        return Err(Self::unsupported(&name_tok, "GRAPH with a variable"));
                    }
                    let name = self.iri()?;
                    let inner = self.group()?;
                    elements.push(Element::Pattern(GraphPattern::Graph(name, Box::new(inner))));
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("FILTER") => {
                    self.next();
                    elements.push(Element::Filter(self.constraint()?));
                }
                Tok::Eof => return Err(Self::syntax(&t, "unterminated group, expected '}'")),
                _ => {
                    let triples = self.triples_block()?;
                    elements.push(Element::Pattern(GraphPattern::Bgp(triples)));
                }
            }
        }

        let mut filters = Vec::new();
        let mut pattern: Option<GraphPattern> = None;
        for e in elements {
            match e {
                Element::Filter(f) => filters.push(f),
                Element::Pattern(p) => {
                    pattern = Some(match pattern {
                        None => p,
                        // adjacent triple blocks form one BGP
                        Some(GraphPattern::Bgp(mut a)) if matches!(p, GraphPattern::Bgp(_)) => {
                            let GraphPattern::Bgp(b) = p else {
                                unreachable!()
                            };
                            a.extend(b);
                            GraphPattern::Bgp(a)
                        }
                        Some(prev) => GraphPattern::Join(Box::new(prev), Box::new(p)),
                    });
                }
            }
        }
        let mut pattern = pattern.unwrap_or(GraphPattern::Bgp(Vec::new()));
        if let Some(expr) = filters
            .into_iter()
            .reduce(|a, b| Expression::And(Box::new(a), Box::new(b)))
        {
            pattern = GraphPattern::Filter(expr, Box::new(pattern));
        }
        Ok(pattern)
    }

    /// Triples up to the next element that is not a triple.
    fn triples_block(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        let mut out = Vec::new();
        loop {
            let subject = self.term_pattern("subject")?;
            self.property_list(&subject, &mut out)?;
            if self.peek().tok != Tok::Punct(".") {
                return Ok(out);
            }
            self.next();
            self.reject_unsupported()?;
            let t = &self.peek().tok;
            let starts_triple = matches!(
                t,
                Tok::Var(_)
                    | Tok::IriRef(_)
                    | Tok::PName { .. }
                    | Tok::Str(_)
                    | Tok::Integer(_)
                    | Tok::Decimal(_)
                    | Tok::Double(_)
                    | Tok::BNode(_)
                    | Tok::Punct("[")
            ) || matches!(t, Tok::Word(w) if w == "true" || w == "false");
            if !starts_triple {
                return Ok(out);
            }
        }
    }

    fn property_list(
        &mut self,
        subject: &TermPattern,
        out: &mut Vec<TriplePattern>,
    ) -> Result<(), QueryError> {
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.term_pattern("object")?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
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
            if matches!(self.peek().tok, Tok::Punct(".") | Tok::Punct("}")) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<VerbPattern, QueryError> {
        if let Tok::Var(v) = &self.peek().tok {
            let v = Variable::new(v.clone());
            self.next();
            return Ok(VerbPattern::Variable(v));
        }
        let path = self.path()?;
        Ok(VerbPattern::Path(path))
    }

    fn path(&mut self) -> Result<PathExpr, QueryError> {
        let mut path = self.path_primary()?;
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Punct("/") => {
                    self.next();
                    let rhs = self.path_primary()?;
                    path = PathExpr::Sequence(Box::new(path), Box::new(rhs));
                }
                Tok::Punct("|") => {
                    return Err(Self::unsupported(&t, "alternative property path '|'"))
                }
                Tok::Punct("*") | Tok::Punct("+") => {
                    return Err(Self::unsupported(
                        &t,
                        format!("property path modifier '{}'", t.tok),
                    ))
                }
                _ => return Ok(path),
            }
        }
    }

    fn path_primary(&mut self) -> Result<PathExpr, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Word(w) if w == "a" => {
                self.next();
                Ok(PathExpr::Predicate(Iri::new(rdf::TYPE).expect("rdf:type")))
            }
            Tok::Punct("(") => {
                self.next();
                let p = self.path()?;
                self.expect(")")?;
                Ok(p)
            }
            Tok::Punct("^") | Tok::Punct("!") => Err(Self::unsupported(
                &t,
                format!("property path operator '{}'", t.tok),
            )),
            Tok::Punct("^^") => Err(Self::unsupported(&t, "property path operator '^'")),
            _ => {
                let iri = self.iri()?;
                // `?x <p>? ?y` style modifiers
                if let Tok::Punct(m @ ("*" | "+")) = self.peek().tok {
                    return Err(Self::unsupported(
                        self.peek(),
                        format!("property path modifier '{m}'"),
                    ));
                }
                Ok(PathExpr::Predicate(iri))
            }
        }
    }

    fn term_pattern(&mut self, position: &str) -> Result<TermPattern, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Var(v) => {
                self.next();
                Ok(TermPattern::Variable(Variable::new(v.clone())))
            }
            Tok::BNode(_) | Tok::Punct("[") => Err(Self::unsupported(&t, "blank nodes in queries")),
            Tok::Punct("(") => Err(Self::unsupported(&t, "collections")),
            _ => match self.constant()? {
                Some(term) => Ok(TermPattern::Term(term)),
                None => Err(Self::syntax(
                    &t,
                    format!("expected {position}, found {}", t.tok),
                )),
            },
        }
    }

    /// IRI or literal, if one starts here.
    fn constant(&mut self) -> Result<Option<Term>, QueryError> {
        let t = self.peek().clone();
        let typed = |lex: &str, dt: &str| {
            Literal::typed(lex, Iri::new(dt).expect("xsd datatype"))
                .map(Term::Literal)
                .map_err(|e| Self::syntax(&t, e.to_string()))
        };
        let term = match &t.tok {
            Tok::IriRef(_) | Tok::PName { .. } => Term::Iri(self.iri()?),
            Tok::Integer(n) => {
                self.next();
                typed(n, xsd::INTEGER)?
            }
            Tok::Decimal(n) => {
                self.next();
                typed(n, xsd::DECIMAL)?
            }
            Tok::Double(n) => {
                self.next();
                typed(n, xsd::DOUBLE)?
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                self.next();
                typed(w, xsd::BOOLEAN)?
            }
            Tok::Str(s) => {
                self.next();
                let s = s.clone();
                match &self.peek().tok {
                    Tok::Punct("^^") => {
                        self.next();
                        let dt = self.iri()?;
                        Term::Literal(
                            Literal::typed(s, dt).map_err(|e| Self::syntax(&t, e.to_string()))?,
                        )
                    }
                    Tok::At(_) => {
                        return Err(Self::unsupported(self.peek(), "language-tagged literals"))
                    }
                    _ => Term::Literal(Literal::string(s)),
                }
            }
            _ => return Ok(None),
        };
        Ok(Some(term))
    }

    fn iri_ref(&mut self) -> Result<Iri, QueryError> {
        let t = self.next();
        match &t.tok {
            Tok::IriRef(r) => self.resolve(&t, r),
            other => Err(Self::syntax(&t, format!("expected IRI, found {other}"))),
        }
    }

    fn resolve(&self, t: &Token, reference: &str) -> Result<Iri, QueryError> {
        match self.prefixes.base() {
            Some(base) => resolve_iri(base, reference),
            None => Iri::new(reference),
        }
        .map_err(|e| Self::syntax(t, e.to_string()))
    }

    fn iri(&mut self) -> Result<Iri, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::IriRef(_) => self.iri_ref(),
            Tok::PName { prefix, local } => {
                self.next();
                if self.prefixes.get(prefix).is_none() {
                    return Err(QueryError::UndefinedPrefix {
                        prefix: prefix.clone(),
                        line: t.line,
                        col: t.col,
                    });
                }
                self.prefixes
                    .expand(prefix, local)
                    .map_err(|e| Self::syntax(&t, e.to_string()))
            }
            other => Err(Self::syntax(&t, format!("expected IRI, found {other}"))),
        }
    }

    fn constraint(&mut self) -> Result<Expression, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Punct("(") => {
                self.next();
                let e = self.expression()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Word(_) => self.primary(),
            _ => Err(Self::syntax(
                &t,
                format!("expected '(' after FILTER, found {}", t.tok),
            )),
        }
    }

    fn expression(&mut self) -> Result<Expression, QueryError> {
        let mut lhs = self.relational()?;
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Punct("&&") => {
                    self.next();
                    let rhs = self.relational()?;
                    lhs = Expression::And(Box::new(lhs), Box::new(rhs));
                }
                Tok::Punct("||") => return Err(Self::unsupported(&t, "operator '||'")),
                _ => return Ok(lhs),
            }
        }
    }

    fn relational(&mut self) -> Result<Expression, QueryError> {
        let lhs = self.primary()?;
        let t = self.peek().clone();
        match &t.tok {
            Tok::Punct("=") => {
                self.next();
                let rhs = self.primary()?;
                if let Tok::Punct(op @ ("=" | "!=" | "<" | ">" | "<=" | ">=")) = self.peek().tok {
                    return Err(Self::unsupported(
                        self.peek(),
                        format!("chained operator '{op}'"),
                    ));
                }
                Ok(Expression::Equals(Box::new(lhs), Box::new(rhs)))
            }
            Tok::Punct(op @ ("!=" | "<" | ">" | "<=" | ">=" | "+" | "-" | "*" | "/")) => {
                Err(Self::unsupported(&t, format!("operator '{op}'")))
            }
            _ => Ok(lhs),
        }
    }

    fn primary(&mut self) -> Result<Expression, QueryError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Punct("(") => {
                self.next();
                let e = self.expression()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Var(v) => {
                self.next();
                Ok(Expression::Variable(Variable::new(v.clone())))
            }
            Tok::Punct("!") => Err(Self::unsupported(&t, "operator '!'")),
            Tok::Word(w) if !(w == "true" || w == "false") => {
                let name = w.to_ascii_uppercase();
                self.next();
                let ctor: fn(Box<Expression>) -> Expression = match name.as_str() {
                    "YEAR" => Expression::Year,
                    "MONTH" => Expression::Month,
                    "DAY" => Expression::Day,
                    _ if UNSUPPORTED.contains(&name.as_str()) => {
                        return Err(Self::unsupported(&t, name))
                    }
                    _ => return Err(Self::unsupported(&t, format!("function {name}"))),
                };
                self.expect("(")?;
                let arg = self.expression()?;
                self.expect(")")?;
                Ok(ctor(Box::new(arg)))
            }
            _ => match self.constant()? {
                Some(term) => Ok(Expression::Constant(term)),
                None => Err(Self::syntax(
                    &t,
                    format!("expected expression, found {}", t.tok),
                )),
            },
        }
    }
}
