use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use crate::rdf::vocab::ARQ_DEFAULT_GRAPH;
use crate::rdf::{Dataset, GraphName, Iri, Term, TermId, DEFAULT_GRAPH};

use super::ast::*;
use super::expr::{
    date_part, effective_boolean_value, eq_key, eval_equals, DatePart, EqKey, ExprError,
};
use super::results::SolutionSequence;
use super::{parse_query, QueryError};

/// Evaluates `query` over `ds` with no time limit.
pub fn evaluate(ds: &Dataset, query: &SelectQuery) -> SolutionSequence {
    evaluate_with_deadline(ds, query, None).expect("no deadline, no timeout")
}

/// Evaluates `query`, giving up with [`QueryError::Timeout`] once `deadline`
/// has passed.
pub fn evaluate_with_deadline(
    ds: &Dataset,
    query: &SelectQuery,
    deadline: Option<Instant>,
) -> Result<SolutionSequence, QueryError> {
    let mut compiler = Compiler::new(ds, &query.dataset);
    let root = compiler.pattern(&query.pattern, &compiler.default_graphs.clone());
    let projection: Vec<usize> = query.projection.iter().map(|v| compiler.slot(v)).collect();
    let width = compiler.slots;

    let mut exec = Exec {
        ds,
        deadline,
        ticks: 0,
    };
    let rows = exec.run(&root, width)?;

    let mut out: Vec<Vec<Option<Term>>> = rows
        .iter()
        .map(|row| {
            projection
                .iter()
                .map(|&s| (row[s] != UNBOUND).then(|| ds.term(row[s]).clone()))
                .collect()
        })
        .collect();
    out.sort_unstable();
    if let Some(limit) = query.limit {
        out.truncate(limit);
    }
    Ok(SolutionSequence::new(query.projection.clone(), out))
}

/// Parses and evaluates in one step.
pub fn execute(ds: &Dataset, query: &str) -> Result<SolutionSequence, QueryError> {
    execute_with_deadline(ds, query, None)
}

pub fn execute_with_deadline(
    ds: &Dataset,
    query: &str,
    deadline: Option<Instant>,
) -> Result<SolutionSequence, QueryError> {
    let q = parse_query(query)?;
    evaluate_with_deadline(ds, &q, deadline)
}

const UNBOUND: TermId = 0;
type Row = Vec<TermId>;

#[derive(Clone, Copy, Debug)]
enum Pos {
    Slot(usize),
    Const(TermId),
}

enum CExpr {
    Slot(usize),
    Const(Term),
    Equals(Box<CExpr>, Box<CExpr>),
    And(Box<CExpr>, Box<CExpr>),
    Part(DatePart, Box<CExpr>),
}

impl CExpr {
    fn slots(&self, out: &mut BTreeSet<usize>) {
        match self {
            CExpr::Slot(s) => {
                out.insert(*s);
            }
            CExpr::Const(_) => {}
            CExpr::Equals(a, b) | CExpr::And(a, b) => {
                a.slots(out);
                b.slots(out);
            }
            CExpr::Part(_, e) => e.slots(out),
        }
    }

    fn conjuncts<'a>(&'a self, out: &mut Vec<&'a CExpr>) {
        match self {
            CExpr::And(a, b) => {
                a.conjuncts(out);
                b.conjuncts(out);
            }
            e => out.push(e),
        }
    }
}

enum Node {
    Bgp {
        graphs: Vec<TermId>,
        patterns: Vec<[Pos; 3]>,
        /// A constant absent from the store: no solutions.
        empty: bool,
    },
    Join(Box<Node>, Box<Node>),
    Filter(CExpr, Box<Node>),
}

impl Node {
    fn bound_slots(&self, out: &mut BTreeSet<usize>) {
        match self {
            Node::Bgp { patterns, .. } => {
                for p in patterns {
                    for pos in p {
                        if let Pos::Slot(s) = pos {
                            out.insert(*s);
                        }
                    }
                }
            }
            Node::Join(a, b) => {
                a.bound_slots(out);
                b.bound_slots(out);
            }
            Node::Filter(_, n) => n.bound_slots(out),
        }
    }
}

struct Compiler<'d> {
    ds: &'d Dataset,
    vars: HashMap<Variable, usize>,
    slots: usize,
    default_graphs: Vec<TermId>,
    named_graphs: BTreeSet<TermId>,
}

impl<'d> Compiler<'d> {
    fn new(ds: &'d Dataset, clauses: &[DatasetClause]) -> Self {
        let (default_graphs, named_graphs) = if clauses.is_empty() {
            (vec![DEFAULT_GRAPH], ds.named_graph_ids().collect())
        } else {
            let mut default = BTreeSet::new();
            let mut named = BTreeSet::new();
            for c in clauses {
                match c {
                    DatasetClause::Default(iri) if iri.as_str() == ARQ_DEFAULT_GRAPH => {
                        default.insert(DEFAULT_GRAPH);
                    }
                    DatasetClause::Default(iri) => default.extend(Self::named_id(ds, iri)),
                    DatasetClause::Named(iri) => named.extend(Self::named_id(ds, iri)),
                }
            }
            (default.into_iter().collect(), named)
        };
        Compiler {
            ds,
            vars: HashMap::new(),
            slots: 0,
            default_graphs,
            named_graphs,
        }
    }

    fn named_id(ds: &Dataset, iri: &Iri) -> Option<TermId> {
        ds.graph_id(&GraphName::Named(iri.clone()))
    }

    fn slot(&mut self, v: &Variable) -> usize {
        if let Some(&s) = self.vars.get(v) {
            return s;
        }
        let s = self.fresh();
        self.vars.insert(v.clone(), s);
        s
    }

    fn fresh(&mut self) -> usize {
        self.slots += 1;
        self.slots - 1
    }

    fn term(&self, t: &Term, empty: &mut bool) -> Pos {
        match self.ds.id_of(t) {
            Some(id) => Pos::Const(id),
            None => {
                *empty = true;
                Pos::Const(UNBOUND)
            }
        }
    }

    fn term_pattern(&mut self, t: &TermPattern, empty: &mut bool) -> Pos {
        match t {
            TermPattern::Variable(v) => Pos::Slot(self.slot(v)),
            TermPattern::Term(t) => self.term(t, empty),
        }
    }

    fn pattern(&mut self, gp: &GraphPattern, graphs: &[TermId]) -> Node {
        match gp {
            GraphPattern::Bgp(triples) => {
                let mut empty = false;
                let mut patterns = Vec::new();
                for t in triples {
                    let s = self.term_pattern(&t.subject, &mut empty);
                    let o = self.term_pattern(&t.object, &mut empty);
                    match &t.predicate {
                        VerbPattern::Variable(v) => patterns.push([s, Pos::Slot(self.slot(v)), o]),
                        VerbPattern::Path(path) => {
                            let steps = path.steps();
                            let mut from = s;
                            for (i, p) in steps.iter().enumerate() {
                                let p = self.term(&Term::Iri((*p).clone()), &mut empty);
                                let to = if i + 1 == steps.len() {
                                    o
                                } else {
                                    Pos::Slot(self.fresh())
                                };
                                patterns.push([from, p, to]);
                                from = to;
                            }
                        }
                    }
                }
                Node::Bgp {
                    graphs: graphs.to_vec(),
                    patterns,
                    empty,
                }
            }
            GraphPattern::Graph(name, inner) => {
                let g: Vec<TermId> = Self::named_id(self.ds, name)
                    .filter(|g| self.named_graphs.contains(g))
                    .into_iter()
                    .collect();
                self.pattern(inner, &g)
            }
            GraphPattern::Join(a, b) => {
                let a = self.pattern(a, graphs);
                let b = self.pattern(b, graphs);
                Node::Join(Box::new(a), Box::new(b))
            }
            GraphPattern::Filter(e, inner) => {
                let inner = self.pattern(inner, graphs);
                Node::Filter(self.expr(e), Box::new(inner))
            }
        }
    }

    fn expr(&mut self, e: &Expression) -> CExpr {
        let b = |c: &mut Self, e: &Expression| Box::new(c.expr(e));
        match e {
            Expression::Variable(v) => CExpr::Slot(self.slot(v)),
            Expression::Constant(t) => CExpr::Const(t.clone()),
            Expression::Equals(x, y) => CExpr::Equals(b(self, x), b(self, y)),
            Expression::And(x, y) => CExpr::And(b(self, x), b(self, y)),
            Expression::Year(x) => CExpr::Part(DatePart::Year, b(self, x)),
            Expression::Month(x) => CExpr::Part(DatePart::Month, b(self, x)),
            Expression::Day(x) => CExpr::Part(DatePart::Day, b(self, x)),
        }
    }
}

struct Exec<'d> {
    ds: &'d Dataset,
    deadline: Option<Instant>,
    ticks: u32,
}

impl<'d> Exec<'d> {
    fn tick(&mut self) -> Result<(), QueryError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(QueryError::Timeout);
                }
            }
        }
        Ok(())
    }

    fn run(&mut self, node: &Node, width: usize) -> Result<Vec<Row>, QueryError> {
        match node {
            Node::Bgp {
                graphs,
                patterns,
                empty,
            } => {
                if *empty || (graphs.is_empty() && !patterns.is_empty()) {
                    return Ok(Vec::new());
                }
                self.bgp(graphs, patterns, width)
            }
            Node::Join(a, b) => {
                let left = self.run(a, width)?;
                let right = self.run(b, width)?;
                self.hash_join(a, b, left, right, &[])
            }
            Node::Filter(e, inner) => {
                if let Node::Join(a, b) = inner.as_ref() {
                    let keys = equi_keys(e, a, b);
                    if !keys.is_empty() {
                        let left = self.run(a, width)?;
                        let right = self.run(b, width)?;
                        let mut rows = self.hash_join(a, b, left, right, &keys)?;
                        rows.retain(|r| self.keep(e, r));
                        return Ok(rows);
                    }
                }
                let mut rows = self.run(inner, width)?;
                rows.retain(|r| self.keep(e, r));
                Ok(rows)
            }
        }
    }

    fn bgp(
        &mut self,
        graphs: &[TermId],
        patterns: &[[Pos; 3]],
        width: usize,
    ) -> Result<Vec<Row>, QueryError> {
        let mut rows = vec![vec![UNBOUND; width]];
        let mut bound = BTreeSet::new();
        let mut remaining: Vec<&[Pos; 3]> = patterns.iter().collect();
        while !remaining.is_empty() {
            // most selective next: the pattern with the most fixed positions
            let score = |p: &[Pos; 3]| {
                p.iter()
                    .filter(|pos| match pos {
                        Pos::Const(_) => true,
                        Pos::Slot(s) => bound.contains(s),
                    })
                    .count()
            };
            let (i, _) = remaining
                .iter()
                .enumerate()
                .max_by_key(|(i, p)| (score(p), std::cmp::Reverse(*i)))
                .expect("non-empty");
            let pattern = remaining.remove(i);

            let mut next = Vec::new();
            for row in &rows {
                let fixed = |pos: &Pos| match *pos {
                    Pos::Const(id) => Some(id),
                    Pos::Slot(s) => (row[s] != UNBOUND).then_some(row[s]),
                };
                let (s, p, o) = (fixed(&pattern[0]), fixed(&pattern[1]), fixed(&pattern[2]));
                if graphs.len() == 1 {
                    for triple in self.ds.scan(graphs[0], s, p, o) {
                        self.tick()?;
                        extend(row, pattern, triple, &mut next);
                    }
                } else {
                    // union of graphs: each distinct triple once
                    let mut seen = BTreeSet::new();
                    for &g in graphs {
                        for triple in self.ds.scan(g, s, p, o) {
                            self.tick()?;
                            if seen.insert(triple) {
                                extend(row, pattern, triple, &mut next);
                            }
                        }
                    }
                }
            }
            rows = next;
            for pos in pattern {
                if let Pos::Slot(s) = pos {
                    bound.insert(*s);
                }
            }
            if rows.is_empty() {
                break;
            }
        }
        Ok(rows)
    }

    /// Joins on shared variables plus the `=` conjuncts in `keys`, each a
    /// (left expression, right expression) pair.
    fn hash_join(
        &mut self,
        a: &Node,
        b: &Node,
        left: Vec<Row>,
        right: Vec<Row>,
        keys: &[(&CExpr, &CExpr)],
    ) -> Result<Vec<Row>, QueryError> {
        let mut left_slots = BTreeSet::new();
        a.bound_slots(&mut left_slots);
        let mut right_slots = BTreeSet::new();
        b.bound_slots(&mut right_slots);
        let shared: Vec<usize> = left_slots.intersection(&right_slots).copied().collect();
        let right_only: Vec<usize> = right_slots.difference(&left_slots).copied().collect();

        let key_of = |row: &Row, left_side: bool, ds: &Dataset| {
            let ids: Vec<TermId> = shared.iter().map(|&s| row[s]).collect();
            let mut eq = Vec::with_capacity(keys.len());
            for &(l, r) in keys {
                let v = eval(if left_side { l } else { r }, row, ds).ok()?;
                eq.push(eq_key(&v)?);
            }
            Some((ids, eq))
        };

        let mut table: HashMap<(Vec<TermId>, Vec<EqKey>), Vec<usize>> = HashMap::new();
        for (i, row) in right.iter().enumerate() {
            self.tick()?;
            if let Some(k) = key_of(row, false, self.ds) {
                table.entry(k).or_default().push(i);
            }
        }
        let mut out = Vec::new();
        for row in &left {
            self.tick()?;
            let Some(k) = key_of(row, true, self.ds) else {
                continue;
            };
            if let Some(matches) = table.get(&k) {
                for &j in matches {
                    self.tick()?;
                    let mut merged = row.clone();
                    for &s in &right_only {
                        merged[s] = right[j][s];
                    }
                    out.push(merged);
                }
            }
        }
        Ok(out)
    }

    fn keep(&self, e: &CExpr, row: &Row) -> bool {
        matches!(
            eval(e, row, self.ds).and_then(|t| effective_boolean_value(&t)),
            Ok(true)
        )
    }
}

fn extend(row: &Row, pattern: &[Pos; 3], triple: [TermId; 3], out: &mut Vec<Row>) {
    let mut new = row.clone();
    for (pos, id) in pattern.iter().zip(triple) {
        if let Pos::Slot(s) = *pos {
            if new[s] == UNBOUND {
                new[s] = id;
            } else if new[s] != id {
                return;
            }
        }
    }
    out.push(new);
}

/// `=` conjuncts of `e` whose sides split cleanly between the two join inputs.
fn equi_keys<'e>(e: &'e CExpr, a: &Node, b: &Node) -> Vec<(&'e CExpr, &'e CExpr)> {
    let mut left = BTreeSet::new();
    a.bound_slots(&mut left);
    let mut right = BTreeSet::new();
    b.bound_slots(&mut right);
    let mut conjuncts = Vec::new();
    e.conjuncts(&mut conjuncts);
    let mut keys = Vec::new();
    for c in conjuncts {
        let CExpr::Equals(x, y) = c else { continue };
        let (mut vx, mut vy) = (BTreeSet::new(), BTreeSet::new());
        x.slots(&mut vx);
        y.slots(&mut vy);
        if vx.is_empty() || vy.is_empty() {
            continue;
        }
        if vx.is_subset(&left) && vy.is_subset(&right) {
            keys.push((x.as_ref(), y.as_ref()));
        } else if vy.is_subset(&left) && vx.is_subset(&right) {
            keys.push((y.as_ref(), x.as_ref()));
        }
    }
    keys
}

fn eval<'a>(e: &'a CExpr, row: &Row, ds: &'a Dataset) -> Result<Cow<'a, Term>, ExprError> {
    Ok(match e {
        CExpr::Slot(s) => match row[*s] {
            UNBOUND => return Err(ExprError::Unbound),
            id => Cow::Borrowed(ds.term(id)),
        },
        CExpr::Const(t) => Cow::Borrowed(t),
        CExpr::Equals(a, b) => {
            let (x, y) = (eval(a, row, ds)?, eval(b, row, ds)?);
            let v = eval_equals(&x, &y)?;
            Cow::Owned(Term::Literal(crate::rdf::Literal::boolean(v)))
        }
        CExpr::And(a, b) => {
            let x = eval(a, row, ds).and_then(|t| effective_boolean_value(&t));
            let y = eval(b, row, ds).and_then(|t| effective_boolean_value(&t));
            let v = match (x, y) {
                (Ok(false), _) | (_, Ok(false)) => false,
                (Ok(true), Ok(true)) => true,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            Cow::Owned(Term::Literal(crate::rdf::Literal::boolean(v)))
        }
        CExpr::Part(part, x) => {
            let x = eval(x, row, ds)?;
            Cow::Owned(date_part(&x, *part)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Literal, Quad};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://x/{s}")).unwrap()
    }

    fn store() -> Dataset {
        let g = GraphName::Named(iri("g"));
        let mut ds = Dataset::new();
        for (s, p, o, graph) in [
            ("a", "p", "b", GraphName::Default),
            ("b", "q", "c", GraphName::Default),
            ("a", "p", "d", g.clone()),
            ("d", "q", "e", g.clone()),
        ] {
            ds.insert(&Quad::new(iri(s), iri(p), iri(o), graph));
        }
        ds.insert(&Quad::new(
            iri("a"),
            iri("t"),
            Literal::date_time("2016-05-01T10:00:00Z".parse().unwrap()),
            GraphName::Default,
        ));
        ds
    }

    fn run(q: &str) -> Vec<Vec<String>> {
        execute(&store(), q)
            .unwrap()
            .rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|t| t.as_ref().map_or("-".into(), |t| t.to_string()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn sequence_path() {
        let rows = run("BASE <http://x/> SELECT ?s ?o { ?s <p>/<q> ?o }");
        assert_eq!(rows, vec![vec!["<http://x/a>", "<http://x/c>"]]);
    }

    #[test]
    fn graph_scoping() {
        let rows = run("BASE <http://x/> SELECT ?o { GRAPH <g> { <a> <p> ?o } }");
        assert_eq!(rows, vec![vec!["<http://x/d>"]]);
        let rows = run("BASE <http://x/> SELECT ?o { <a> <p> ?o }");
        assert_eq!(rows, vec![vec!["<http://x/b>"]]);
    }

    #[test]
    fn from_clauses_select_graphs() {
        let rows = run("BASE <http://x/> SELECT ?o FROM <g> { <a> <p> ?o }");
        assert_eq!(rows, vec![vec!["<http://x/d>"]]);
        let rows =
            run("BASE <http://x/> SELECT ?o FROM <urn:x-arq:DefaultGraph> FROM <g> { <a> <p> ?o }");
        assert_eq!(rows.len(), 2);
        // named graph not listed with FROM NAMED is invisible to GRAPH
        let rows = run(
            "BASE <http://x/> SELECT ?o FROM <urn:x-arq:DefaultGraph> { GRAPH <g> { <a> <p> ?o } }",
        );
        assert!(rows.is_empty());
        let rows = run("BASE <http://x/> SELECT ?o FROM <missing> { ?s ?p ?o }");
        assert!(rows.is_empty());
    }

    #[test]
    fn filter_errors_drop_rows() {
        let rows = run("BASE <http://x/> SELECT ?o { <a> ?p ?o FILTER(year(?o) = 2016) }");
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn limit_zero() {
        assert!(run("SELECT ?s { ?s ?p ?o } LIMIT 0").is_empty());
        assert_eq!(run("SELECT ?s { ?s ?p ?o } LIMIT 2").len(), 2);
    }

    #[test]
    fn empty_group_has_one_solution() {
        let s = execute(&store(), "SELECT * { }").unwrap();
        assert_eq!(s.rows().len(), 1);
    }

    #[test]
    fn missing_constant_matches_nothing() {
        assert!(run("SELECT ?s { ?s <http://x/nope> ?o }").is_empty());
    }

    #[test]
    fn expired_deadline_times_out() {
        let mut ds = Dataset::new();
        for i in 0..5000 {
            ds.insert(&Quad::new(
                iri(&format!("s{i}")),
                iri("p"),
                Literal::integer(i),
                GraphName::Default,
            ));
        }
        let past = Instant::now();
        let r = execute_with_deadline(&ds, "SELECT * { ?s ?p ?o . ?t ?q ?r }", Some(past));
        assert_eq!(r.unwrap_err(), QueryError::Timeout);
    }
}
