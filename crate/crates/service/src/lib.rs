//! HTTP front end for the checker.
//!
//! Endpoints: `POST /v1/check`, `GET /v1/wordlist`, `GET /v1/expand?word=`.
//! Annotation offsets are byte offsets into the submitted UTF-8 text.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tenhundred::morphology::{Derivation, Rule};
use tenhundred::{Engine, Lexeme, MorphologyError, Verdict};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const DEFAULT_MAX_BODY: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_body_bytes: usize,
    /// Origins allowed to call the service; empty means any origin.
    pub allowed_origins: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_body_bytes: DEFAULT_MAX_BODY,
            allowed_origins: Vec::new(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct CheckRequest {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Annotation {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub verdict: Verdict,
    pub rules: Vec<Rule>,
    pub suggestions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub tokens: usize,
    pub allowed: usize,
    pub extra: usize,
    pub rejected: usize,
    /// Share of allowed tokens; `null` for a text without tokens.
    pub coverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResponse {
    pub annotations: Vec<Annotation>,
    pub stats: Stats,
}

/// Checks `text` and annotates every token that is not allowed.
pub fn check_text(engine: &Engine, text: &str) -> CheckResponse {
    let tokens = engine.tokenize(text);
    let mut cache: HashMap<&str, tenhundred::CheckResult> = HashMap::new();
    let mut annotations = Vec::new();
    let (mut allowed, mut extra, mut rejected) = (0, 0, 0);
    for t in &tokens {
        let result = cache
            .entry(t.surface.as_str())
            .or_insert_with(|| engine.check_token(&t.surface));
        match result.verdict {
            Verdict::Allowed => {
                allowed += 1;
                continue;
            }
            Verdict::Extra => extra += 1,
            Verdict::Rejected => rejected += 1,
        }
        annotations.push(Annotation {
            start: t.span.0,
            end: t.span.1,
            surface: t.surface.clone(),
            verdict: result.verdict,
            rules: result.rules(),
            suggestions: result.suggestions.clone(),
        });
    }
    let coverage = (!tokens.is_empty()).then(|| allowed as f64 / tokens.len() as f64);
    CheckResponse {
        annotations,
        stats: Stats {
            tokens: tokens.len(),
            allowed,
            extra,
            rejected,
            coverage,
        },
    }
}

#[derive(Serialize)]
struct WordListPayload<'a> {
    version: &'a str,
    size: usize,
    entries: &'a [Lexeme],
}

#[derive(Serialize)]
struct ExpandPayload<'a> {
    word: &'a str,
    derivations: &'a [Derivation],
}

#[derive(Serialize)]
struct ErrorPayload<'a> {
    error: &'a str,
}

struct AppState {
    engine: Arc<Engine>,
    wordlist_body: Bytes,
    etag: HeaderValue,
}

/// Hex SHA-256 of the serialized word list, used as its version tag.
pub fn wordlist_version(engine: &Engine) -> String {
    let body = serde_json::to_vec(engine.words().entries()).expect("word list serializes");
    hex(&Sha256::digest(&body))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn json(status: StatusCode, body: Vec<u8>) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: &str) -> Response {
    json(
        status,
        serde_json::to_vec(&ErrorPayload { error: message }).expect("error serializes"),
    )
}

async fn check(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let request: CheckRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, &format!("malformed request: {e}")),
    };
    let response = check_text(&state.engine, &request.text);
    json(StatusCode::OK, serde_json::to_vec(&response).expect("response serializes"))
}

async fn wordlist(State(state): State<Arc<AppState>>, headers: HeaderMap) -> Response {
    let fresh = headers
        .get_all(header::IF_NONE_MATCH)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(','))
        .any(|tag| {
            let tag = tag.trim();
            tag == "*" || tag.trim_start_matches("W/") == state.etag
        });
    let etag = (header::ETAG, state.etag.clone());
    if fresh {
        return (StatusCode::NOT_MODIFIED, [etag]).into_response();
    }
    (
        StatusCode::OK,
        [etag, (header::CONTENT_TYPE, HeaderValue::from_static("application/json"))],
        state.wordlist_body.clone(),
    )
        .into_response()
}

async fn expand(State(state): State<Arc<AppState>>, Query(query): Query<HashMap<String, String>>) -> Response {
    let word = match query.get("word").map(|w| w.trim().to_lowercase()) {
        Some(w) if !w.is_empty() => w,
        _ => return error(StatusCode::BAD_REQUEST, "missing `word` parameter"),
    };
    match state.engine.morphology().derive_forms(&word) {
        Ok(derivations) => json(
            StatusCode::OK,
            serde_json::to_vec(&ExpandPayload {
                word: &word,
                derivations: &derivations,
            })
            .expect("derivations serialize"),
        ),
        Err(MorphologyError::NotListed(w)) => error(StatusCode::NOT_FOUND, &format!("`{w}` is not on the list")),
    }
}

fn cors(config: &ServiceConfig) -> CorsLayer {
    let origin = if config.allowed_origins.is_empty() {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(
            config
                .allowed_origins
                .iter()
                .filter_map(|o| HeaderValue::from_str(o).ok()),
        )
    };
    CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
        .allow_headers([header::CONTENT_TYPE, header::IF_NONE_MATCH])
        .expose_headers([header::ETAG])
}

pub fn router(engine: Arc<Engine>, config: &ServiceConfig) -> Router {
    let version = wordlist_version(&engine);
    let body = serde_json::to_vec(&WordListPayload {
        version: &version,
        size: engine.words().len(),
        entries: engine.words().entries(),
    })
    .expect("word list serializes");
    let etag = HeaderValue::from_str(&format!("\"{version}\"")).expect("hex is a valid header");
    let state = Arc::new(AppState {
        engine,
        wordlist_body: Bytes::from(body),
        etag,
    });
    Router::new()
        .route("/v1/check", post(check))
        .route("/v1/wordlist", get(wordlist))
        .route("/v1/expand", get(expand))
        .layer(DefaultBodyLimit::max(config.max_body_bytes))
        .layer(cors(config))
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, engine: Arc<Engine>, config: &ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(engine, config)).await
}
