use std::fmt;

use crate::rdf::{Iri, PrefixMap, Term};

/// A query variable, stored without its `?`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermPattern {
    Variable(Variable),
    Term(Term),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathExpr {
    Predicate(Iri),
    Sequence(Box<PathExpr>, Box<PathExpr>),
}

impl PathExpr {
    /// Predicates along the path, left to right.
    pub fn steps(&self) -> Vec<&Iri> {
        match self {
            PathExpr::Predicate(p) => vec![p],
            PathExpr::Sequence(a, b) => {
                let mut s = a.steps();
                s.extend(b.steps());
                s
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VerbPattern {
    Variable(Variable),
    Path(PathExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: VerbPattern,
    pub object: TermPattern,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphPattern {
    Bgp(Vec<TriplePattern>),
    Graph(Iri, Box<GraphPattern>),
    Filter(Expression, Box<GraphPattern>),
    Join(Box<GraphPattern>, Box<GraphPattern>),
}

impl GraphPattern {
    /// Variables bound by the pattern, in order of first appearance.
    /// Filter expressions do not bind.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<Variable>) {
        let mut push = |v: &Variable| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            GraphPattern::Bgp(triples) => {
                for t in triples {
                    if let TermPattern::Variable(v) = &t.subject {
                        push(v);
                    }
                    if let VerbPattern::Variable(v) = &t.predicate {
                        push(v);
                    }
                    if let TermPattern::Variable(v) = &t.object {
                        push(v);
                    }
                }
            }
            GraphPattern::Graph(_, p) | GraphPattern::Filter(_, p) => p.collect_variables(out),
            GraphPattern::Join(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    Variable(Variable),
    Constant(Term),
    Equals(Box<Expression>, Box<Expression>),
    And(Box<Expression>, Box<Expression>),
    Year(Box<Expression>),
    Month(Box<Expression>),
    Day(Box<Expression>),
}

impl Expression {
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<Variable>) {
        match self {
            Expression::Variable(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expression::Constant(_) => {}
            Expression::Equals(a, b) | Expression::And(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
            Expression::Year(e) | Expression::Month(e) | Expression::Day(e) => {
                e.collect_variables(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetClause {
    /// `FROM <iri>`: merged into the default graph.
    Default(Iri),
    /// `FROM NAMED <iri>`: available to `GRAPH`.
    Named(Iri),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectQuery {
    pub base: Option<Iri>,
    pub prefixes: PrefixMap,
    pub projection: Vec<Variable>,
    pub dataset: Vec<DatasetClause>,
    pub pattern: GraphPattern,
    pub limit: Option<usize>,
}
