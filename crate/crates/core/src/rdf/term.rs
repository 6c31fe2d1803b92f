use std::fmt;

use chrono::{DateTime, NaiveDateTime, Utc};

use super::vocab::xsd;
use super::RdfError;

/// An absolute IRI. Compared by codepoints; never normalized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if scheme_len(&value).is_none() {
            return Err(RdfError::RelativeIri(value));
        }
        if let Some(offset) = value.find(|c: char| is_forbidden_iri_char(c)) {
            return Err(RdfError::InvalidIri { iri: value, offset });
        }
        Ok(Iri(value))
    }

    /// Builds an IRI from a value that is known to be absolute (vocabulary constants,
    /// concatenations onto an already valid base).
    pub(crate) fn new_unchecked(value: impl Into<String>) -> Self {
        Iri(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Appends a suffix verbatim.
    pub fn join(&self, suffix: &str) -> Iri {
        Iri(format!("{}{}", self.0, suffix))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Length of the `scheme` in `scheme ":" ...`, if any.
pub(crate) fn scheme_len(s: &str) -> Option<usize> {
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, c)) if c.is_ascii_alphabetic() => {}
        _ => return None,
    }
    for (i, c) in chars {
        if c == ':' {
            return Some(i);
        }
        if !(c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
            return None;
        }
    }
    None
}

pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

/// A literal with a datatype. Language-tagged strings are not modelled.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::new_unchecked(xsd::STRING),
        }
    }

    /// A typed literal. Numeric and dateTime lexical forms are validated.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, RdfError> {
        let lexical = lexical.into();
        let ok = match datatype.as_str() {
            xsd::DECIMAL => is_decimal_lexical(&lexical),
            xsd::INTEGER => is_integer_lexical(&lexical),
            xsd::DOUBLE => lexical.trim().parse::<f64>().is_ok(),
            xsd::DATE_TIME => parse_date_time(&lexical).is_some(),
            xsd::BOOLEAN => matches!(lexical.as_str(), "true" | "false" | "1" | "0"),
            _ => true,
        };
        if !ok {
            return Err(RdfError::InvalidLiteral {
                lexical,
                datatype: datatype.0,
            });
        }
        Ok(Literal { lexical, datatype })
    }

    pub fn decimal(value: f64) -> Self {
        debug_assert!(value.is_finite());
        // f64 Display never uses exponent notation, which xsd:decimal forbids.
        let mut lexical = format!("{}", value);
        if lexical == "-0" {
            lexical = "0".into();
        }
        Literal {
            lexical,
            datatype: Iri::new_unchecked(xsd::DECIMAL),
        }
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Iri::new_unchecked(xsd::INTEGER),
        }
    }

    pub fn boolean(value: bool) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Iri::new_unchecked(xsd::BOOLEAN),
        }
    }

    pub fn date_time(value: DateTime<Utc>) -> Self {
        Literal {
            lexical: value.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            datatype: Iri::new_unchecked(xsd::DATE_TIME),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self.datatype.as_str(),
            xsd::DECIMAL | xsd::INTEGER | xsd::DOUBLE
        )
    }

    /// Numeric value for decimal, integer and double literals.
    pub fn as_f64(&self) -> Option<f64> {
        if self.is_numeric() {
            self.lexical.trim().parse().ok()
        } else {
            None
        }
    }

    /// Instant for `xsd:dateTime` literals, converted to UTC.
    pub fn as_date_time(&self) -> Option<DateTime<Utc>> {
        if self.datatype.as_str() == xsd::DATE_TIME {
            parse_date_time(&self.lexical)
        } else {
            None
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        if self.datatype.as_str() != xsd::STRING {
            write!(f, "^^{}", self.datatype)?;
        }
        Ok(())
    }
}

/// Parses an ISO-8601 dateTime. A missing offset is read as UTC.
pub fn parse_date_time(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f")
        .ok()
        .map(|naive| naive.and_utc())
}

fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    (!int.is_empty() || !frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Self {
        BlankNode(label.into())
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// Any RDF term.
///
/// The derived ordering is the canonical order used for every deterministic
/// output in the crate: blank nodes, then IRIs, then literals; within a kind,
/// by codepoints (literals by lexical form, then datatype).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    BlankNode(BlankNode),
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::BlankNode(b) => b.fmt(f),
            Term::Iri(i) => i.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(i) => Term::Iri(i),
            Subject::BlankNode(b) => Term::BlankNode(b),
        }
    }
}

/// The subject position: an IRI or a blank node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    BlankNode(BlankNode),
    Iri(Iri),
}

impl From<Iri> for Subject {
    fn from(i: Iri) -> Self {
        Subject::Iri(i)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::BlankNode(b)
    }
}

impl TryFrom<Term> for Subject {
    type Error = RdfError;

    fn try_from(t: Term) -> Result<Self, RdfError> {
        match t {
            Term::Iri(i) => Ok(Subject::Iri(i)),
            Term::BlankNode(b) => Ok(Subject::BlankNode(b)),
            Term::Literal(l) => Err(RdfError::LiteralSubject(l.to_string())),
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::BlankNode(b) => b.fmt(f),
            Subject::Iri(i) => i.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphName {
    Default,
    Named(Iri),
}

impl fmt::Display for GraphName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphName::Default => f.write_str("DEFAULT"),
            GraphName::Named(i) => i.fmt(f),
        }
    }
}

impl From<Iri> for GraphName {
    fn from(i: Iri) -> Self {
        GraphName::Named(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
    pub graph: GraphName,
}

impl Quad {
    pub fn new(
        subject: impl Into<Subject>,
        predicate: Iri,
        object: impl Into<Term>,
        graph: GraphName,
    ) -> Self {
        Quad {
            subject: subject.into(),
            predicate,
            object: object.into(),
            graph,
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)?;
        if let GraphName::Named(g) = &self.graph {
            write!(f, " {}", g)?;
        }
        f.write_str(" .")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_iri_rejected() {
        assert!(matches!(
            Iri::new("resource/x"),
            Err(RdfError::RelativeIri(_))
        ));
        assert!(Iri::new("urn:x-arq:DefaultGraph").is_ok());
        assert!(matches!(
            Iri::new("http://a/b c"),
            Err(RdfError::InvalidIri { offset: 10, .. })
        ));
    }

    #[test]
    fn numeric_literals_validated() {
        let dec = Iri::new(xsd::DECIMAL).unwrap();
        assert!(Literal::typed("12.5", dec.clone()).is_ok());
        assert!(Literal::typed("-.5", dec.clone()).is_ok());
        assert!(Literal::typed("1e3", dec.clone()).is_err());
        assert!(Literal::typed("abc", Iri::new(xsd::INTEGER).unwrap()).is_err());
        assert!(Literal::typed("2016-05-01T00:00:00Z", Iri::new(xsd::DATE_TIME).unwrap()).is_ok());
        assert!(Literal::typed("2016-05-01", Iri::new(xsd::DATE_TIME).unwrap()).is_err());
    }

    #[test]
    fn decimal_lexical_has_no_exponent() {
        assert_eq!(Literal::decimal(1e-7).lexical(), "0.0000001");
        assert_eq!(Literal::decimal(12.5).lexical(), "12.5");
        assert_eq!(Literal::decimal(-0.0).lexical(), "0");
        assert_eq!(Literal::decimal(3.0).as_f64(), Some(3.0));
    }

    #[test]
    fn date_time_offsets_convert_to_utc() {
        let t = parse_date_time("2016-05-01T01:30:00+02:00").unwrap();
        assert_eq!(Literal::date_time(t).lexical(), "2016-04-30T23:30:00Z");
        assert!(parse_date_time("2016-05-01T00:00:00").is_some());
    }

    #[test]
    fn canonical_order_by_kind() {
        let b = Term::BlankNode(BlankNode::new("z"));
        let i = Term::Iri(Iri::new("http://a").unwrap());
        let l = Term::Literal(Literal::string("a"));
        assert!(b < i && i < l);
    }
}
