use hecp::rdf::{GraphName, Iri, Quad, Term};
use hecp_testkit::gen::{random_dataset, NS};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn pick<T: Clone>(rng: &mut StdRng, items: &[T]) -> Option<T> {
    if items.is_empty() || rng.gen_bool(0.4) {
        None
    } else {
        Some(items[rng.gen_range(0..items.len())].clone())
    }
}

#[test]
fn pattern_lookup_equals_linear_scan() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..20 {
        let ds = random_dataset(&mut rng, 400);
        let all = ds.quads();
        let subjects: Vec<Term> = all.iter().map(|q| Term::from(q.subject.clone())).collect();
        let predicates: Vec<Iri> = all.iter().map(|q| q.predicate.clone()).collect();
        let mut objects: Vec<Term> = all.iter().map(|q| q.object.clone()).collect();
        objects.push(Term::Iri(Iri::new(format!("{NS}absent")).unwrap()));
        let mut graphs: Vec<GraphName> = all.iter().map(|q| q.graph.clone()).collect();
        graphs.push(GraphName::Named(Iri::new(format!("{NS}nowhere")).unwrap()));
        for _ in 0..50 {
            let s = pick(&mut rng, &subjects);
            let p = pick(&mut rng, &predicates);
            let o = pick(&mut rng, &objects);
            let g = pick(&mut rng, &graphs);
            let expected: Vec<Quad> = all
                .iter()
                .filter(|q| {
                    s.as_ref()
                        .is_none_or(|s| Term::from(q.subject.clone()) == *s)
                        && p.as_ref().is_none_or(|p| q.predicate == *p)
                        && o.as_ref().is_none_or(|o| q.object == *o)
                        && g.as_ref().is_none_or(|g| q.graph == *g)
                })
                .cloned()
                .collect();
            assert_eq!(
                ds.match_pattern(s.as_ref(), p.as_ref(), o.as_ref(), g.as_ref()),
                expected
            );
        }
    }
}

#[test]
fn duplicate_inserts_are_ignored() {
    let mut rng = StdRng::seed_from_u64(3);
    let ds = random_dataset(&mut rng, 200);
    let mut copy = ds.clone();
    for q in ds.quads() {
        assert!(!copy.insert(&q));
    }
    assert_eq!(copy.len(), ds.len());
    assert_eq!(copy.quads(), ds.quads());
}
