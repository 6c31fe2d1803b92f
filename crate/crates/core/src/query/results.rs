use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::rdf::vocab::xsd;
use crate::rdf::Term;

use super::Variable;

/// Query answers: one row per solution, one column per projected variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSequence {
    variables: Vec<Variable>,
    rows: Vec<Vec<Option<Term>>>,
}

impl SolutionSequence {
    /// Panics if a row's width differs from `variables`.
    pub fn new(variables: Vec<Variable>, rows: Vec<Vec<Option<Term>>>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == variables.len()),
            "row width mismatch"
        );
        SolutionSequence { variables, rows }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn rows(&self) -> &[Vec<Option<Term>>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of `var` down the rows, or `None` if it is not projected.
    pub fn column(&self, var: &str) -> Option<Vec<Option<&Term>>> {
        let i = self.variables.iter().position(|v| v.name() == var)?;
        Some(self.rows.iter().map(|r| r[i].as_ref()).collect())
    }

    /// SPARQL 1.1 Query Results JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("results serialize")
    }

    /// Header of `?var` names, then one line per row with terms in N-Triples
    /// form; unbound cells are empty.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.variables.iter().map(|v| v.to_string()).collect();
        out.push_str(&header.join("\t"));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|t| t.as_ref().map(|t| t.to_string()).unwrap_or_default())
                .collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

impl Serialize for SolutionSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut top = s.serialize_map(Some(2))?;
        top.serialize_entry("head", &Head(&self.variables))?;
        top.serialize_entry("results", &Results(self))?;
        top.end()
    }
}

struct Head<'a>(&'a [Variable]);

impl Serialize for Head<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        let names: Vec<&str> = self.0.iter().map(Variable::name).collect();
        m.serialize_entry("vars", &names)?;
        m.end()
    }
}

struct Results<'a>(&'a SolutionSequence);

impl Serialize for Results<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("bindings", &Bindings(self.0))?;
        m.end()
    }
}

struct Bindings<'a>(&'a SolutionSequence);

impl Serialize for Bindings<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Binding(&self.0.variables, row))?;
        }
        seq.end()
    }
}

struct Binding<'a>(&'a [Variable], &'a [Option<Term>]);

impl Serialize for Binding<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        for (var, term) in self.0.iter().zip(self.1) {
            if let Some(t) = term {
                m.serialize_entry(var.name(), &JsonTerm(t))?;
            }
        }
        m.end()
    }
}

struct JsonTerm<'a>(&'a Term);

impl Serialize for JsonTerm<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self.0 {
            Term::Iri(i) => {
                m.serialize_entry("type", "uri")?;
                m.serialize_entry("value", i.as_str())?;
            }
            Term::BlankNode(b) => {
                m.serialize_entry("type", "bnode")?;
                m.serialize_entry("value", b.label())?;
            }
            Term::Literal(l) => {
                m.serialize_entry("type", "literal")?;
                m.serialize_entry("value", l.lexical())?;
                if l.datatype().as_str() != xsd::STRING {
                    m.serialize_entry("datatype", l.datatype().as_str())?;
                }
            }
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{BlankNode, Iri, Literal};

    fn sample() -> SolutionSequence {
        SolutionSequence::new(
            vec![Variable::new("s"), Variable::new("v")],
            vec![
                vec![
                    Some(Term::Iri(Iri::new("http://x/a").unwrap())),
                    Some(Term::Literal(Literal::decimal(1.5))),
                ],
                vec![
                    Some(Term::BlankNode(BlankNode::new("b0"))),
                    Some(Term::Literal(Literal::string("hi"))),
                ],
                vec![None, None],
            ],
        )
    }

    #[test]
    fn json_shape() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["head"]["vars"], serde_json::json!(["s", "v"]));
        let b = &v["results"]["bindings"];
        assert_eq!(b[0]["s"]["type"], "uri");
        assert_eq!(b[0]["v"]["datatype"], xsd::DECIMAL);
        assert_eq!(b[1]["s"]["type"], "bnode");
        assert!(b[1]["v"].get("datatype").is_none());
        assert_eq!(b[2], serde_json::json!({}));
        assert!(sample()
            .to_json()
            .starts_with(r#"{"head":{"vars":["s","v"]},"results":{"bindings":["#));
    }

    #[test]
    fn tsv_shape() {
        let tsv = sample().to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "?s\t?v");
        assert_eq!(
            lines[1],
            "<http://x/a>\t\"1.5\"^^<http://www.w3.org/2001/XMLSchema#decimal>"
        );
        assert_eq!(lines[2], "_:b0\t\"hi\"");
        assert_eq!(lines[3], "\t");
    }
}
