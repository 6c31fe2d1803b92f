//! Reference evaluator for the query subset: nested loops over a plain quad
//! list, no indexes, no reordering, paths followed hop by hop.

use std::collections::{BTreeSet, HashMap};

use chrono::{DateTime, Datelike, Utc};
use hecp::query::{
    DatasetClause, Expression, GraphPattern, PathExpr, SelectQuery, TermPattern, Variable,
    VerbPattern,
};
use hecp::rdf::vocab::xsd;
use hecp::rdf::{Dataset, GraphName, Literal, Quad, Term};

type Solution = HashMap<Variable, Term>;
type Triple = (Term, Term, Term);

/// Rows of the projection, sorted so two results compare as multisets.
pub fn naive_evaluate(quads: &[Quad], q: &SelectQuery) -> Vec<Vec<Option<Term>>> {
    let present: BTreeSet<GraphName> = quads.iter().map(|q| q.graph.clone()).collect();
    let (default, named): (Vec<GraphName>, Vec<GraphName>) = if q.dataset.is_empty() {
        (
            vec![GraphName::Default],
            present
                .iter()
                .filter(|g| **g != GraphName::Default)
                .cloned()
                .collect(),
        )
    } else {
        let mut d = Vec::new();
        let mut n = Vec::new();
        for c in &q.dataset {
            match c {
                DatasetClause::Default(iri) if iri.as_str() == "urn:x-arq:DefaultGraph" => {
                    d.push(GraphName::Default)
                }
                DatasetClause::Default(iri) => d.push(GraphName::Named(iri.clone())),
                DatasetClause::Named(iri) => n.push(GraphName::Named(iri.clone())),
            }
        }
        (d, n)
    };
    let ctx = Ctx { quads, named };
    let sols = ctx.eval(&q.pattern, &default);
    let mut rows: Vec<Vec<Option<Term>>> = sols
        .iter()
        .map(|s| q.projection.iter().map(|v| s.get(v).cloned()).collect())
        .collect();
    rows.sort();
    if let Some(limit) = q.limit {
        rows.truncate(limit);
    }
    rows
}

/// Convenience: sorted result rows of the reference evaluator over `ds`.
pub fn naive_query(ds: &Dataset, text: &str) -> Vec<Vec<Option<Term>>> {
    let q = hecp::query::parse_query(text).expect("oracle query parses");
    naive_evaluate(&ds.quads(), &q)
}

struct Ctx<'a> {
    quads: &'a [Quad],
    named: Vec<GraphName>,
}

impl Ctx<'_> {
    /// Distinct triples of the merge of `graphs`.
    fn triples(&self, graphs: &[GraphName]) -> Vec<Triple> {
        let mut set = BTreeSet::new();
        for q in self.quads {
            if graphs.contains(&q.graph) {
                set.insert((
                    Term::from(q.subject.clone()),
                    Term::Iri(q.predicate.clone()),
                    q.object.clone(),
                ));
            }
        }
        set.into_iter().collect()
    }

    fn eval(&self, p: &GraphPattern, active: &[GraphName]) -> Vec<Solution> {
        match p {
            GraphPattern::Bgp(patterns) => {
                let triples = self.triples(active);
                let mut sols = vec![Solution::new()];
                for tp in patterns {
                    let mut next = Vec::new();
                    for sol in &sols {
                        for (s, p, o) in relation(&triples, &tp.predicate) {
                            let mut cand = sol.clone();
                            let verb_ok = match (&tp.predicate, &p) {
                                (VerbPattern::Variable(v), Some(p)) => {
                                    bind(&mut cand, &TermPattern::Variable(v.clone()), p)
                                }
                                _ => true,
                            };
                            if verb_ok
                                && bind(&mut cand, &tp.subject, &s)
                                && bind(&mut cand, &tp.object, &o)
                            {
                                next.push(cand);
                            }
                        }
                    }
                    sols = next;
                }
                sols
            }
            GraphPattern::Graph(iri, inner) => {
                let g = GraphName::Named(iri.clone());
                if self.named.contains(&g) {
                    self.eval(inner, &[g])
                } else {
                    self.eval(inner, &[])
                }
            }
            GraphPattern::Join(a, b) => {
                let left = self.eval(a, active);
                let right = self.eval(b, active);
                let mut out = Vec::new();
                for l in &left {
                    for r in &right {
                        if r.iter().all(|(k, v)| l.get(k).is_none_or(|lv| lv == v)) {
                            let mut m = l.clone();
                            m.extend(r.iter().map(|(k, v)| (k.clone(), v.clone())));
                            out.push(m);
                        }
                    }
                }
                out
            }
            GraphPattern::Filter(e, inner) => self
                .eval(inner, active)
                .into_iter()
                .filter(|s| matches!(value(e, s).and_then(|t| ebv(&t)), Some(true)))
                .collect(),
        }
    }
}

/// `(subject, predicate, object)` for a variable verb, `(subject, None,
/// object)` pairs connected by a path otherwise.
fn relation(triples: &[Triple], verb: &VerbPattern) -> Vec<(Term, Option<Term>, Term)> {
    match verb {
        VerbPattern::Variable(_) => triples
            .iter()
            .map(|(s, p, o)| (s.clone(), Some(p.clone()), o.clone()))
            .collect(),
        VerbPattern::Path(path) => path_pairs(triples, path)
            .into_iter()
            .map(|(s, o)| (s, None, o))
            .collect(),
    }
}

fn path_pairs(triples: &[Triple], path: &PathExpr) -> Vec<(Term, Term)> {
    match path {
        PathExpr::Predicate(p) => triples
            .iter()
            .filter(|(_, tp, _)| matches!(tp, Term::Iri(i) if i == p))
            .map(|(s, _, o)| (s.clone(), o.clone()))
            .collect(),
        PathExpr::Sequence(a, b) => {
            let left = path_pairs(triples, a);
            let right = path_pairs(triples, b);
            let mut out = Vec::new();
            for (x, m) in &left {
                for (m2, y) in &right {
                    if m == m2 {
                        out.push((x.clone(), y.clone()));
                    }
                }
            }
            out
        }
    }
}

fn bind(sol: &mut Solution, pat: &TermPattern, t: &Term) -> bool {
    match pat {
        TermPattern::Term(c) => c == t,
        TermPattern::Variable(v) => match sol.get(v) {
            Some(b) => b == t,
            None => {
                sol.insert(v.clone(), t.clone());
                true
            }
        },
    }
}

enum Val {
    Num(f64),
    Dt(DateTime<Utc>),
    Bool(bool),
    Other,
}

fn classify(t: &Term) -> Val {
    let Term::Literal(l) = t else {
        return Val::Other;
    };
    let dt = l.datatype().as_str();
    if dt == xsd::INTEGER || dt == xsd::DECIMAL || dt == xsd::DOUBLE {
        if let Ok(v) = l.lexical().trim().parse::<f64>() {
            return Val::Num(v);
        }
    }
    if dt == xsd::DATE_TIME {
        if let Some(v) = l.as_date_time() {
            return Val::Dt(v);
        }
    }
    if dt == xsd::BOOLEAN {
        match l.lexical() {
            "true" | "1" => return Val::Bool(true),
            "false" | "0" => return Val::Bool(false),
            _ => {}
        }
    }
    Val::Other
}

fn is_plain_string(t: &Term) -> bool {
    matches!(t, Term::Literal(l) if l.datatype().as_str() == xsd::STRING)
}

/// `None` is an evaluation error.
fn equals(a: &Term, b: &Term) -> Option<bool> {
    match (classify(a), classify(b)) {
        (Val::Num(x), Val::Num(y)) => Some(x == y),
        (Val::Dt(x), Val::Dt(y)) => Some(x == y),
        (Val::Bool(x), Val::Bool(y)) => Some(x == y),
        _ => {
            if a == b {
                Some(true)
            } else if matches!(a, Term::Literal(_)) && matches!(b, Term::Literal(_)) {
                if is_plain_string(a) && is_plain_string(b) {
                    Some(false)
                } else {
                    None
                }
            } else {
                Some(false)
            }
        }
    }
}

fn ebv(t: &Term) -> Option<bool> {
    match classify(t) {
        Val::Bool(b) => Some(b),
        Val::Num(v) => Some(v != 0.0 && !v.is_nan()),
        _ if is_plain_string(t) => Some(!t.as_literal()?.lexical().is_empty()),
        _ => None,
    }
}

fn value(e: &Expression, s: &Solution) -> Option<Term> {
    match e {
        Expression::Variable(v) => s.get(v).cloned(),
        Expression::Constant(t) => Some(t.clone()),
        Expression::Equals(a, b) => {
            let r = equals(&value(a, s)?, &value(b, s)?)?;
            Some(Term::Literal(Literal::boolean(r)))
        }
        Expression::And(a, b) => {
            let x = value(a, s).and_then(|t| ebv(&t));
            let y = value(b, s).and_then(|t| ebv(&t));
            let r = match (x, y) {
                (Some(false), _) | (_, Some(false)) => false,
                (Some(true), Some(true)) => true,
                _ => return None,
            };
            Some(Term::Literal(Literal::boolean(r)))
        }
        Expression::Year(x) | Expression::Month(x) | Expression::Day(x) => {
            let t = value(x, s)?;
            let Val::Dt(dt) = classify(&t) else {
                return None;
            };
            let n = match e {
                Expression::Year(_) => dt.year() as i64,
                Expression::Month(_) => dt.month() as i64,
                _ => dt.day() as i64,
            };
            Some(Term::Literal(Literal::integer(n)))
        }
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = s + v;
        c += if s.abs() >= v.abs() {
            (s - t) + v
        } else {
            (v - t) + s
        };
        s = t;
    }
    s + c
}

/// Pearson correlation by the two-pass textbook formula with compensated
/// sums; `NaN` when undefined.
pub fn reference_pcc(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = compensated_sum(x.iter().copied()) / n;
    let my = compensated_sum(y.iter().copied()) / n;
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let sxx = compensated_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    let syy = compensated_sum(y.iter().map(|b| (b - my) * (b - my)));
    sxy / (sxx.sqrt() * syy.sqrt())
}
