//! Random datasets and queries over a small shared vocabulary, so that
//! joins, filters and graph scoping all have a fair chance of matching.

use chrono::{TimeZone, Utc};
use hecp::rdf::{Dataset, GraphName, Iri, Literal, Quad, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub const NS: &str = "http://example.org/";
const SUBJECTS: usize = 5;
const PREDICATES: usize = 4;
const GRAPHS: usize = 2;

fn iri(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}")).expect("valid IRI")
}

fn random_object(rng: &mut impl Rng) -> Term {
    match rng.gen_range(0..7) {
        0..=2 => Term::Iri(iri(&format!("s{}", rng.gen_range(0..SUBJECTS)))),
        3 => Term::Literal(Literal::integer(rng.gen_range(0..4))),
        4 => Term::Literal(Literal::decimal(rng.gen_range(0..4) as f64)),
        5 => {
            let day = rng.gen_range(1..4);
            let hour = rng.gen_range(0..24);
            Term::Literal(Literal::date_time(
                Utc.with_ymd_and_hms(2016, 5, day, hour, 0, 0).unwrap(),
            ))
        }
        _ => Term::Literal(Literal::string(["a", "b", ""][rng.gen_range(0..3)])),
    }
}

/// Between half of and `max_quads` quads, spread over the default graph and two named graphs.
pub fn random_dataset(rng: &mut impl Rng, max_quads: usize) -> Dataset {
    let n = rng.gen_range(max_quads / 2..=max_quads);
    let mut ds = Dataset::new();
    for _ in 0..n {
        let graph = match rng.gen_range(0..=GRAPHS) {
            0 => GraphName::Default,
            g => GraphName::Named(iri(&format!("g{}", g - 1))),
        };
        ds.insert(&Quad::new(
            iri(&format!("s{}", rng.gen_range(0..SUBJECTS))),
            iri(&format!("p{}", rng.gen_range(0..PREDICATES))),
            random_object(rng),
            graph,
        ));
    }
    ds
}

struct QueryGen<'r, R: Rng> {
    rng: &'r mut R,
    vars: Vec<String>,
}

impl<R: Rng> QueryGen<'_, R> {
    /// A fresh variable half the time, otherwise one already in use.
    fn var(&mut self) -> String {
        if self.vars.len() < 6 && (self.vars.is_empty() || self.rng.gen_bool(0.5)) {
            let v = format!("?v{}", self.vars.len());
            self.vars.push(v.clone());
            v
        } else {
            self.seen_var()
        }
    }

    /// A variable already used by the query, when there is one.
    fn seen_var(&mut self) -> String {
        if self.vars.is_empty() {
            self.var()
        } else {
            self.vars[self.rng.gen_range(0..self.vars.len())].clone()
        }
    }

    fn node(&mut self) -> String {
        if self.rng.gen_bool(0.85) {
            self.var()
        } else {
            format!("<s{}>", self.rng.gen_range(0..SUBJECTS))
        }
    }

    fn object(&mut self) -> String {
        match self.rng.gen_range(0..10) {
            0..=7 => self.var(),
            8 => format!("<s{}>", self.rng.gen_range(0..SUBJECTS)),
            _ => [format!("{}", self.rng.gen_range(0..4)), "\"a\"".into()]
                [self.rng.gen_range(0..2)]
            .clone(),
        }
    }

    fn verb(&mut self) -> String {
        match self.rng.gen_range(0..8) {
            0 => self.var(),
            1 | 2 => {
                let hops = if self.rng.gen_bool(0.8) { 2 } else { 3 };
                (0..hops)
                    .map(|_| format!("<p{}>", self.rng.gen_range(0..PREDICATES)))
                    .collect::<Vec<_>>()
                    .join("/")
            }
            _ => format!("<p{}>", self.rng.gen_range(0..PREDICATES)),
        }
    }

    fn triples(&mut self) -> String {
        let n = self.rng.gen_range(1..=2);
        (0..n)
            .map(|_| {
                let s = self.node();
                let v = self.verb();
                let mut o = self.object();
                // self-loops rarely match; keep a few
                if o == s && self.rng.gen_bool(0.8) {
                    o = self.object();
                }
                format!("{s} {v} {o} .")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn operand(&mut self) -> String {
        match self.rng.gen_range(0..6) {
            0 | 1 => self.seen_var(),
            2 => format!(
                "{}({})",
                ["year", "month", "day"][self.rng.gen_range(0..3)],
                self.seen_var()
            ),
            3 => format!("{}", self.rng.gen_range(0..4)),
            4 => format!("{}", [1, 2, 3, 5, 2016][self.rng.gen_range(0..5)]),
            _ => format!("<s{}>", self.rng.gen_range(0..SUBJECTS)),
        }
    }

    fn expr(&mut self, depth: u32) -> String {
        if depth < 2 && self.rng.gen_bool(0.3) {
            format!("({} && {})", self.expr(depth + 1), self.expr(depth + 1))
        } else if self.rng.gen_bool(0.1) {
            self.seen_var()
        } else {
            format!("{} = {}", self.operand(), self.operand())
        }
    }

    fn group(&mut self, depth: u32) -> String {
        let mut parts = Vec::new();
        let n = self.rng.gen_range(1..=2);
        for _ in 0..n {
            match self.rng.gen_range(0..10) {
                0..=4 => parts.push(self.triples()),
                5 | 6 if depth < 2 => {
                    let g = match self.rng.gen_range(0..6) {
                        5 => "<missing>".to_string(),
                        g => format!("<g{}>", g % GRAPHS),
                    };
                    let inner = self.group(depth + 1);
                    parts.push(format!("GRAPH {g} {inner}"));
                }
                7 if depth < 2 => parts.push(self.group(depth + 1)),
                8 => {
                    let e = self.expr(0);
                    parts.push(format!("FILTER({e})"));
                }
                _ => parts.push(self.triples()),
            }
        }
        format!("{{ {} }}", parts.join(" "))
    }
}

/// A random query in the supported subset, relative IRIs resolved against
/// [`NS`]. Projection is `*` or a subset of the pattern's variables.
pub fn random_query(rng: &mut impl Rng) -> String {
    let mut g = QueryGen {
        rng,
        vars: Vec::new(),
    };
    let body = g.group(0);
    let mut dataset = String::new();
    if g.rng.gen_bool(0.3) {
        let mut clauses = Vec::new();
        if g.rng.gen_bool(0.6) {
            clauses.push("FROM <urn:x-arq:DefaultGraph>".to_string());
        }
        for i in 0..GRAPHS {
            match g.rng.gen_range(0..3) {
                0 => clauses.push(format!("FROM <g{i}>")),
                1 => clauses.push(format!("FROM NAMED <g{i}>")),
                _ => {}
            }
        }
        dataset = clauses.join(" ");
    }
    let limit = if g.rng.gen_bool(0.2) {
        format!(" LIMIT {}", g.rng.gen_range(0..5))
    } else {
        String::new()
    };
    // only variables bound by triple patterns may be projected; filter-only
    // variables are left out by projecting through a parse of the body
    let projection = {
        let probe = format!("BASE <{NS}> SELECT * WHERE {body}");
        let bound: Vec<String> = hecp::query::parse_query(&probe)
            .map(|q| q.projection.iter().map(|v| v.to_string()).collect())
            .unwrap_or_default();
        if bound.is_empty() || g.rng.gen_bool(0.3) {
            "*".to_string()
        } else {
            let k = g.rng.gen_range(1..=bound.len());
            let mut chosen: Vec<String> = bound.choose_multiple(g.rng, k).cloned().collect();
            chosen.sort();
            chosen.join(" ")
        }
    };
    format!("BASE <{NS}> SELECT {projection} {dataset} WHERE {body}{limit}")
}
