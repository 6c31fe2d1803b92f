//! Read-only SPARQL query endpoint over one immutable dataset.
//!
//! `GET /sparql?query=...` and `POST /sparql` with an
//! `application/sparql-query` body answer with SPARQL results JSON.
//! `GET /health` answers `ok`.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use hecp::query::{execute_with_deadline, QueryError};
use hecp::rdf::Dataset;
use hecp::store::{load_store, StoreError, StoreFile};
use serde::Deserialize;
use thiserror::Error;

pub const RESULTS_JSON: &str = "application/sparql-results+json";
pub const SPARQL_QUERY: &str = "application/sparql-query";

#[derive(Debug, Error)]
pub enum EndpointError {
    #[error("port must be in 1-65535")]
    InvalidPort,
    #[error("timeout must be positive")]
    InvalidTimeout,
    #[error("maximum query length must be positive")]
    InvalidMaxQueryLength,
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("server failed: {0}")]
    Serve(std::io::Error),
}

#[derive(Clone, Debug)]
pub struct EndpointConfig {
    pub bind: SocketAddr,
    /// Turtle inputs loaded by [`EndpointConfig::load_dataset`].
    pub dataset: Vec<StoreFile>,
    /// Bytes.
    pub max_query_len: usize,
    pub timeout: Duration,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            bind: SocketAddr::from(([127, 0, 0, 1], 7878)),
            dataset: Vec::new(),
            max_query_len: 64 * 1024,
            timeout: Duration::from_secs(30),
        }
    }
}

impl EndpointConfig {
    pub fn validate(&self) -> Result<(), EndpointError> {
        if self.bind.port() == 0 {
            return Err(EndpointError::InvalidPort);
        }
        if self.timeout.is_zero() {
            return Err(EndpointError::InvalidTimeout);
        }
        if self.max_query_len == 0 {
            return Err(EndpointError::InvalidMaxQueryLength);
        }
        Ok(())
    }

    pub fn load_dataset(&self) -> Result<Dataset, EndpointError> {
        Ok(load_store(&self.dataset)?)
    }
}

#[derive(Clone)]
struct AppState {
    dataset: Arc<Dataset>,
    max_query_len: usize,
    timeout: Duration,
}

/// Routes for `/sparql` and `/health` over `dataset`.
pub fn router(dataset: Arc<Dataset>, config: &EndpointConfig) -> Router {
    let state = AppState {
        dataset,
        max_query_len: config.max_query_len,
        timeout: config.timeout,
    };
    Router::new()
        .route("/sparql", get(query_get).post(query_post))
        .route("/health", get(|| async { "ok" }))
        .layer(DefaultBodyLimit::max(
            config.max_query_len.saturating_add(1),
        ))
        .with_state(state)
}

/// Validates the config, binds `config.bind` and serves until the process
/// ends.
pub async fn serve(config: EndpointConfig, dataset: Arc<Dataset>) -> Result<(), EndpointError> {
    config.validate()?;
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .map_err(|source| EndpointError::Bind {
            addr: config.bind,
            source,
        })?;
    serve_on(listener, config, dataset).await
}

/// Serves on an already bound listener; the config's bind address is ignored.
pub async fn serve_on(
    listener: tokio::net::TcpListener,
    config: EndpointConfig,
    dataset: Arc<Dataset>,
) -> Result<(), EndpointError> {
    if config.timeout.is_zero() {
        return Err(EndpointError::InvalidTimeout);
    }
    axum::serve(listener, router(dataset, &config))
        .await
        .map_err(EndpointError::Serve)
}

#[derive(Deserialize)]
struct GetParams {
    query: Option<String>,
}

async fn query_get(State(state): State<AppState>, Query(params): Query<GetParams>) -> Response {
    match params.query {
        Some(q) => run(state, q).await,
        None => client_error(StatusCode::BAD_REQUEST, "missing query parameter"),
    }
}

async fn query_post(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let content_type = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .map(str::trim);
    if content_type != Some(SPARQL_QUERY) {
        return client_error(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            &format!("request body must be {SPARQL_QUERY}"),
        );
    }
    match String::from_utf8(body.to_vec()) {
        Ok(q) => run(state, q).await,
        Err(_) => client_error(StatusCode::BAD_REQUEST, "query is not valid UTF-8"),
    }
}

async fn run(state: AppState, query: String) -> Response {
    if query.len() > state.max_query_len {
        return client_error(
            StatusCode::PAYLOAD_TOO_LARGE,
            &format!("query exceeds {} bytes", state.max_query_len),
        );
    }
    let deadline = Instant::now() + state.timeout;
    let ds = Arc::clone(&state.dataset);
    let task =
        tokio::task::spawn_blocking(move || execute_with_deadline(&ds, &query, Some(deadline)));
    // the engine checks the deadline itself; the outer timer covers the
    // gap between checks
    let grace = Duration::from_millis(250);
    match tokio::time::timeout(state.timeout + grace, task).await {
        Ok(Ok(Ok(solutions))) => {
            ([(header::CONTENT_TYPE, RESULTS_JSON)], solutions.to_json()).into_response()
        }
        Ok(Ok(Err(QueryError::Timeout))) | Err(_) => client_error(
            StatusCode::SERVICE_UNAVAILABLE,
            "query exceeded the time limit",
        ),
        Ok(Ok(Err(e))) => client_error(StatusCode::BAD_REQUEST, &e.to_string()),
        Ok(Err(_)) => client_error(StatusCode::INTERNAL_SERVER_ERROR, "query evaluation failed"),
    }
}

fn client_error(status: StatusCode, message: &str) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
        format!("{message}\n"),
    )
        .into_response()
}
