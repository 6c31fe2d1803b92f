use std::collections::BTreeSet;

use hecp::names::Minter;
use hecp::rdf::{
    parse_turtle, serialize_turtle, BlankNode, Dataset, GraphName, Iri, Literal, PrefixMap, Quad,
    Subject, Term,
};
use proptest::prelude::*;

fn graph() -> GraphName {
    Minter::default().cossmic_graph()
}

fn iri_strategy() -> impl Strategy<Value = Iri> {
    prop_oneof![
        (0..6u32).prop_map(|i| Iri::new(format!(
            "http://jresearch.ucd.ie/climate-kg/resource/cossmic/n{i}"
        ))
        .unwrap()),
        (0..3u32).prop_map(|i| Iri::new(format!("https://w3id.org/seas/term{i}")).unwrap()),
        (0..3u32).prop_map(|i| Iri::new(format!("http://other.example/x#{i}")).unwrap()),
    ]
}

fn literal_strategy() -> impl Strategy<Value = Literal> {
    prop_oneof![
        "[a-z \"\\\\\n\té]{0,8}".prop_map(Literal::string),
        (-1000i64..1000).prop_map(Literal::integer),
        (-1.0e4f64..1.0e4).prop_map(Literal::decimal),
        any::<bool>().prop_map(Literal::boolean),
        (0i64..2_000_000_000)
            .prop_map(|s| Literal::date_time(chrono::DateTime::from_timestamp(s, 0).unwrap())),
    ]
}

fn quad_strategy() -> impl Strategy<Value = Quad> {
    let subject = prop_oneof![
        3 => iri_strategy().prop_map(Subject::Iri),
        1 => (0..3u32).prop_map(|i| Subject::BlankNode(BlankNode::new(format!("b{i}")))),
    ];
    let object = prop_oneof![
        iri_strategy().prop_map(Term::Iri),
        (0..3u32).prop_map(|i| Term::BlankNode(BlankNode::new(format!("b{i}")))),
        literal_strategy().prop_map(Term::Literal),
    ];
    (subject, iri_strategy(), object).prop_map(|(s, p, o)| Quad::new(s, p, o, graph()))
}

fn round_trip(quads: &[Quad]) -> (String, BTreeSet<Quad>) {
    let ds: Dataset = quads.iter().collect();
    let prefixes = PrefixMap::standard(Some(Minter::default().base().clone()));
    let ttl = serialize_turtle(&ds, &graph(), &prefixes);
    let back = parse_turtle(&ttl, None, &graph()).unwrap_or_else(|e| panic!("{e}\n{ttl}"));
    (ttl, back.quads.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialize_then_parse_is_identity(quads in prop::collection::vec(quad_strategy(), 0..40)) {
        let (_, back) = round_trip(&quads);
        let expected: BTreeSet<Quad> = quads.into_iter().collect();
        prop_assert_eq!(back, expected);
    }

    #[test]
    fn serialization_ignores_insertion_order(quads in prop::collection::vec(quad_strategy(), 0..40)) {
        let mut reversed = quads.clone();
        reversed.reverse();
        prop_assert_eq!(round_trip(&quads).0, round_trip(&reversed).0);
    }
}
