use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use hecp::query::execute;
use hecp::rdf::{Dataset, Iri, Literal, Quad};
use hecp_endpoint::{serve, serve_on, EndpointConfig, EndpointError, RESULTS_JSON, SPARQL_QUERY};
use hecp_testkit::fixtures::{three_day_dataset, weather_join_query};
use hecp_testkit::naive_query;

async fn start(ds: Dataset, config: EndpointConfig) -> SocketAddr {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(serve_on(listener, config, Arc::new(ds)));
    addr
}

fn one_quad() -> Dataset {
    let mut ds = Dataset::new();
    ds.insert(&Quad::new(
        Iri::new("http://ex.org/s").unwrap(),
        Iri::new("http://ex.org/p").unwrap(),
        Literal::integer(1),
        hecp::rdf::GraphName::Default,
    ));
    ds
}

fn client() -> reqwest::Client {
    reqwest::Client::new()
}

#[tokio::test]
async fn health_is_ok() {
    let addr = start(Dataset::new(), EndpointConfig::default()).await;
    let r = client()
        .get(format!("http://{addr}/health"))
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 200);
    assert_eq!(r.text().await.unwrap(), "ok");
}

#[tokio::test]
async fn get_returns_results_json() {
    let ds = one_quad();
    let q = "SELECT ?s WHERE { ?s ?p ?o } LIMIT 1";
    let expected_rows = naive_query(&ds, q);
    let addr = start(ds, EndpointConfig::default()).await;
    let r = client()
        .get(format!("http://{addr}/sparql"))
        .query(&[("query", q)])
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 200);
    assert_eq!(r.headers()["content-type"], RESULTS_JSON);
    let body = r.text().await.unwrap();
    assert_eq!(expected_rows.len(), 1);
    assert_eq!(
        body,
        r#"{"head":{"vars":["s"]},"results":{"bindings":[{"s":{"type":"uri","value":"http://ex.org/s"}}]}}"#
    );
}

#[tokio::test]
async fn post_matches_local_execution() {
    let ds = three_day_dataset();
    let expected = execute(&ds, &weather_join_query()).unwrap().to_json();
    let addr = start(ds, EndpointConfig::default()).await;
    let r = client()
        .post(format!("http://{addr}/sparql"))
        .header("content-type", SPARQL_QUERY)
        .body(weather_join_query())
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 200);
    assert_eq!(r.text().await.unwrap(), expected);
}

#[tokio::test]
async fn malformed_and_unsupported_queries_are_rejected() {
    let addr = start(one_quad(), EndpointConfig::default()).await;
    let post = |q: &'static str| {
        client()
            .post(format!("http://{addr}/sparql"))
            .header("content-type", SPARQL_QUERY)
            .body(q)
            .send()
    };
    let r = post("SELEC ?s WHERE { ?s ?p ?o }").await.unwrap();
    assert_eq!(r.status(), 400);
    assert!(!r.text().await.unwrap().is_empty());
    let r = post("SELECT ?s WHERE { ?s ?p ?o OPTIONAL { ?s ?p ?x } }")
        .await
        .unwrap();
    assert_eq!(r.status(), 400);
    assert!(r.text().await.unwrap().contains("OPTIONAL"));
    let r = client()
        .get(format!("http://{addr}/sparql"))
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 400);
    let r = client()
        .post(format!("http://{addr}/sparql"))
        .header("content-type", "text/plain")
        .body("SELECT ?s WHERE { ?s ?p ?o }")
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 415);
}

#[tokio::test]
async fn oversized_query_is_413() {
    let config = EndpointConfig {
        max_query_len: 64,
        ..EndpointConfig::default()
    };
    let addr = start(one_quad(), config).await;
    let long = format!("SELECT ?s WHERE {{ ?s ?p ?o }} #{}", "x".repeat(100));
    let r = client()
        .get(format!("http://{addr}/sparql"))
        .query(&[("query", &long)])
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 413);
    let r = client()
        .post(format!("http://{addr}/sparql"))
        .header("content-type", SPARQL_QUERY)
        .body("x".repeat(10_000))
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 413);
}

#[tokio::test]
async fn slow_query_is_503() {
    let (ds, _) = hecp_testkit::fixtures::scale_dataset(2_000, 2);
    let config = EndpointConfig {
        timeout: Duration::from_millis(50),
        ..EndpointConfig::default()
    };
    let addr = start(ds, config).await;
    let q = "SELECT * WHERE { ?a ?b ?c . ?d ?e ?f . ?g ?h ?i }";
    let r = client()
        .get(format!("http://{addr}/sparql"))
        .query(&[("query", q)])
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), 503);
}

#[tokio::test]
async fn concurrent_requests_get_identical_bodies() {
    let addr = start(three_day_dataset(), EndpointConfig::default()).await;
    let query = weather_join_query();
    let handles: Vec<_> = (0..16)
        .map(|_| {
            let q = query.clone();
            tokio::spawn(async move {
                let r = client()
                    .get(format!("http://{addr}/sparql"))
                    .query(&[("query", q)])
                    .send()
                    .await
                    .unwrap();
                assert_eq!(r.status(), 200);
                r.text().await.unwrap()
            })
        })
        .collect();
    let mut bodies = Vec::new();
    for h in handles {
        bodies.push(h.await.unwrap());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn config_validation() {
    let ok = EndpointConfig::default();
    assert!(ok.validate().is_ok());
    let port0 = EndpointConfig {
        bind: "127.0.0.1:0".parse().unwrap(),
        ..EndpointConfig::default()
    };
    assert!(matches!(port0.validate(), Err(EndpointError::InvalidPort)));
    let no_time = EndpointConfig {
        timeout: Duration::ZERO,
        ..EndpointConfig::default()
    };
    assert!(matches!(
        no_time.validate(),
        Err(EndpointError::InvalidTimeout)
    ));
}

#[tokio::test]
async fn bind_conflict_is_an_error() {
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let config = EndpointConfig {
        bind: taken.local_addr().unwrap(),
        ..EndpointConfig::default()
    };
    let err = serve(config, Arc::new(Dataset::new())).await.unwrap_err();
    assert!(matches!(err, EndpointError::Bind { .. }));
}
