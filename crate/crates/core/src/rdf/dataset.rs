//! In-memory quad store.
//!
//! Terms are interned to `u32` ids (0 is reserved for the default graph) and
//! every quad is stored in three sorted permutations, `gspo`, `gpos` and
//! `gosp`. Any combination of bound positions within one graph maps to a
//! contiguous key range of one of them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;
use std::sync::Arc;

use super::term::{GraphName, Iri, Quad, Subject, Term};

pub(crate) type TermId = u32;
pub(crate) const DEFAULT_GRAPH: TermId = 0;

#[derive(Clone, Debug, Default)]
pub struct Dataset {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    /// graph id -> number of quads in it
    graphs: BTreeMap<TermId, usize>,
    gspo: BTreeSet<[TermId; 4]>,
    gpos: BTreeSet<[TermId; 4]>,
    gosp: BTreeSet<[TermId; 4]>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gspo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gspo.is_empty()
    }

    /// Adds a quad; returns false if it was already present.
    pub fn insert(&mut self, quad: &Quad) -> bool {
        let g = match &quad.graph {
            GraphName::Default => DEFAULT_GRAPH,
            GraphName::Named(iri) => self.intern(Term::Iri(iri.clone())),
        };
        let s = self.intern(Term::from(quad.subject.clone()));
        let p = self.intern(Term::Iri(quad.predicate.clone()));
        let o = self.intern(quad.object.clone());
        if !self.gspo.insert([g, s, p, o]) {
            return false;
        }
        self.gpos.insert([g, p, o, s]);
        self.gosp.insert([g, o, s, p]);
        *self.graphs.entry(g).or_default() += 1;
        true
    }

    pub fn extend<'a>(&mut self, quads: impl IntoIterator<Item = &'a Quad>) {
        for q in quads {
            self.insert(q);
        }
    }

    /// Ends the loading phase; the returned snapshot can be shared by any
    /// number of readers.
    pub fn freeze(self) -> Arc<Dataset> {
        Arc::new(self)
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        let Some(g) = self.graph_id(&quad.graph) else {
            return false;
        };
        let ids = (
            self.id_of(&Term::from(quad.subject.clone())),
            self.id_of(&Term::Iri(quad.predicate.clone())),
            self.id_of(&quad.object),
        );
        match ids {
            (Some(s), Some(p), Some(o)) => self.gspo.contains(&[g, s, p, o]),
            _ => false,
        }
    }

    /// Graphs holding at least one quad, default graph first.
    pub fn graph_names(&self) -> Vec<GraphName> {
        self.graphs.keys().map(|&g| self.graph_name(g)).collect()
    }

    /// All quads matching the bound positions, in canonical order
    /// (graph, subject, predicate, object).
    pub fn match_pattern(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
        graph: Option<&GraphName>,
    ) -> Vec<Quad> {
        let lookup = |t: Option<&Term>| match t {
            None => Some(None),
            Some(t) => self.id_of(t).map(Some),
        };
        let (Some(s), Some(p), Some(o)) = (
            lookup(subject),
            lookup(predicate.map(|p| Term::Iri(p.clone())).as_ref()),
            lookup(object),
        ) else {
            return Vec::new();
        };
        let graphs: Vec<TermId> = match graph {
            None => self.graphs.keys().copied().collect(),
            Some(g) => self.graph_id(g).into_iter().collect(),
        };
        let mut out: Vec<Quad> = graphs
            .into_iter()
            .flat_map(|g| self.scan(g, s, p, o).map(move |k| (g, k)))
            .map(|(g, [s, p, o])| self.quad_from_ids(g, s, p, o))
            .collect();
        out.sort();
        out
    }

    /// Every quad, in canonical order.
    pub fn quads(&self) -> Vec<Quad> {
        self.match_pattern(None, None, None, None)
    }

    /// Subjects of `graph` in canonical order, with their quads grouped.
    pub(crate) fn graph_quads(&self, graph: &GraphName) -> Vec<Quad> {
        self.match_pattern(None, None, None, Some(graph))
    }

    // --- id-level access used by the query engine ---

    pub(crate) fn id_of(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub(crate) fn term(&self, id: TermId) -> &Term {
        &self.terms[(id - 1) as usize]
    }

    pub(crate) fn graph_id(&self, graph: &GraphName) -> Option<TermId> {
        match graph {
            GraphName::Default => Some(DEFAULT_GRAPH),
            GraphName::Named(iri) => self
                .id_of(&Term::Iri(iri.clone()))
                .filter(|g| self.graphs.contains_key(g)),
        }
    }

    pub(crate) fn named_graph_ids(&self) -> impl Iterator<Item = TermId> + '_ {
        self.graphs.keys().copied().filter(|&g| g != DEFAULT_GRAPH)
    }

    /// Triples `[s, p, o]` of graph `g` matching the bound ids.
    pub(crate) fn scan(
        &self,
        g: TermId,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = [TermId; 3]> + '_> {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => Box::new(
                self.gspo
                    .contains(&[g, s, p, o])
                    .then_some([s, p, o])
                    .into_iter(),
            ),
            (Some(s), Some(p), None) => {
                Box::new(prefix_range(&self.gspo, &[g, s, p]).map(|k| [k[1], k[2], k[3]]))
            }
            (Some(s), None, None) => {
                Box::new(prefix_range(&self.gspo, &[g, s]).map(|k| [k[1], k[2], k[3]]))
            }
            (None, Some(p), Some(o)) => {
                Box::new(prefix_range(&self.gpos, &[g, p, o]).map(|k| [k[3], k[1], k[2]]))
            }
            (None, Some(p), None) => {
                Box::new(prefix_range(&self.gpos, &[g, p]).map(|k| [k[3], k[1], k[2]]))
            }
            (Some(s), None, Some(o)) => {
                Box::new(prefix_range(&self.gosp, &[g, o, s]).map(|k| [k[2], k[3], k[1]]))
            }
            (None, None, Some(o)) => {
                Box::new(prefix_range(&self.gosp, &[g, o]).map(|k| [k[2], k[3], k[1]]))
            }
            (None, None, None) => {
                Box::new(prefix_range(&self.gspo, &[g]).map(|k| [k[1], k[2], k[3]]))
            }
        }
    }

    fn intern(&mut self, term: Term) -> TermId {
        if let Some(&id) = self.ids.get(&term) {
            return id;
        }
        self.terms.push(term.clone());
        let id = self.terms.len() as TermId;
        self.ids.insert(term, id);
        id
    }

    fn graph_name(&self, g: TermId) -> GraphName {
        if g == DEFAULT_GRAPH {
            GraphName::Default
        } else {
            match self.term(g) {
                Term::Iri(iri) => GraphName::Named(iri.clone()),
                other => unreachable!("graph id bound to non-IRI {other}"),
            }
        }
    }

    fn quad_from_ids(&self, g: TermId, s: TermId, p: TermId, o: TermId) -> Quad {
        let subject = Subject::try_from(self.term(s).clone()).expect("subject id is not a literal");
        let predicate = self
            .term(p)
            .as_iri()
            .expect("predicate id is an IRI")
            .clone();
        Quad {
            subject,
            predicate,
            object: self.term(o).clone(),
            graph: self.graph_name(g),
        }
    }
}

impl<'a> FromIterator<&'a Quad> for Dataset {
    fn from_iter<I: IntoIterator<Item = &'a Quad>>(iter: I) -> Self {
        let mut ds = Dataset::new();
        ds.extend(iter);
        ds
    }
}

impl FromIterator<Quad> for Dataset {
    fn from_iter<I: IntoIterator<Item = Quad>>(iter: I) -> Self {
        let mut ds = Dataset::new();
        for q in iter {
            ds.insert(&q);
        }
        ds
    }
}

fn prefix_range<'a>(
    set: &'a BTreeSet<[TermId; 4]>,
    prefix: &[TermId],
) -> impl Iterator<Item = &'a [TermId; 4]> + 'a {
    let mut lo = [0; 4];
    let mut hi = [TermId::MAX; 4];
    lo[..prefix.len()].copy_from_slice(prefix);
    hi[..prefix.len()].copy_from_slice(prefix);
    set.range((Bound::Included(lo), Bound::Included(hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://ex/{s}")).unwrap()
    }

    fn quad(s: &str, p: &str, o: &str, g: Option<&str>) -> Quad {
        Quad::new(
            iri(s),
            iri(p),
            iri(o),
            g.map_or(GraphName::Default, |g| GraphName::Named(iri(g))),
        )
    }

    #[test]
    fn insertion_is_idempotent() {
        let mut ds = Dataset::new();
        let q = quad("a", "p", "b", None);
        assert!(ds.insert(&q));
        assert_eq!(ds.len(), 1);
        assert!(!ds.insert(&q));
        assert_eq!(ds.len(), 1);
    }

    #[test]
    fn wildcards_on_empty_dataset() {
        assert!(Dataset::new()
            .match_pattern(None, None, None, None)
            .is_empty());
    }

    #[test]
    fn named_graph_quad_only_visible_in_that_graph() {
        let mut ds = Dataset::new();
        let q = quad("a", "p", "b", Some("graph/cossmic"));
        ds.insert(&q);
        assert_eq!(
            ds.match_pattern(None, None, None, Some(&GraphName::Default)),
            vec![]
        );
        assert_eq!(
            ds.match_pattern(None, None, None, Some(&q.graph)),
            vec![q.clone()]
        );
        assert_eq!(ds.match_pattern(None, None, None, None), vec![q]);
    }

    #[test]
    fn graph_names_exclude_graph_iris_used_as_terms() {
        let mut ds = Dataset::new();
        ds.insert(&quad("a", "p", "g", None));
        assert_eq!(ds.graph_names(), vec![GraphName::Default]);
        assert!(ds
            .match_pattern(None, None, None, Some(&GraphName::Named(iri("g"))))
            .is_empty());
    }

    #[test]
    fn unknown_term_matches_nothing() {
        let mut ds = Dataset::new();
        ds.insert(&quad("a", "p", "b", None));
        let lit = Term::Literal(Literal::string("x"));
        assert!(ds.match_pattern(None, None, Some(&lit), None).is_empty());
        assert!(ds.contains(&quad("a", "p", "b", None)));
        assert!(!ds.contains(&quad("a", "p", "b", Some("g"))));
    }
}
