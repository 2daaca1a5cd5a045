use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tenhundred::Engine;
use tenhundred_service::{router, ServiceConfig};
use tower::ServiceExt;

fn engine() -> Arc<Engine> {
    static ENGINE: OnceLock<Arc<Engine>> = OnceLock::new();
    ENGINE.get_or_init(|| Arc::new(Engine::reference())).clone()
}

fn app() -> Router {
    router(engine(), &ServiceConfig::default())
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, axum::http::HeaderMap, Vec<u8>) {
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, headers, body)
}

fn post_check(body: impl Into<Body>) -> Request<Body> {
    Request::post("/v1/check")
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.into())
        .unwrap()
}

async fn check(text: &str) -> Value {
    let body = serde_json::json!({ "text": text }).to_string();
    let (status, _, body) = send(app(), post_check(body)).await;
    assert_eq!(status, StatusCode::OK);
    serde_json::from_slice(&body).unwrap()
}

#[tokio::test]
async fn listed_words_are_not_annotated() {
    let v = check("the heat").await;
    assert_eq!(v["annotations"].as_array().unwrap().len(), 0);
    assert_eq!(v["stats"]["tokens"], 2);
    assert_eq!(v["stats"]["coverage"], 1.0);
}

#[tokio::test]
async fn extra_word_is_annotated() {
    let v = check("mad heat").await;
    let a = v["annotations"].as_array().unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(a[0]["verdict"], "extra");
    assert_eq!(a[0]["surface"], "mad");
    assert_eq!((a[0]["start"].as_u64(), a[0]["end"].as_u64()), (Some(0), Some(3)));
    assert_eq!(a[0]["rules"], serde_json::json!(["extra"]));
    assert_eq!(v["stats"]["extra"], 1);
}

#[tokio::test]
async fn space_boat_passes() {
    let v = check("space boat").await;
    assert_eq!(v["annotations"].as_array().unwrap().len(), 0);
}

#[tokio::test]
async fn annotation_offsets_are_byte_offsets() {
    let text = "\u{201c}Th\u{e9} xylophone\u{201d} is loud";
    let v = check(text).await;
    for a in v["annotations"].as_array().unwrap() {
        let (s, e) = (a["start"].as_u64().unwrap() as usize, a["end"].as_u64().unwrap() as usize);
        assert!(text.get(s..e).is_some());
    }
    let x = &v["annotations"].as_array().unwrap().iter().find(|a| a["surface"] == "xylophone").unwrap();
    let (s, e) = (x["start"].as_u64().unwrap() as usize, x["end"].as_u64().unwrap() as usize);
    assert_eq!(&text[s..e], "xylophone");
    assert_eq!(x["verdict"], "rejected");
    assert!(!x["suggestions"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn empty_text_has_no_coverage() {
    let v = check("").await;
    assert_eq!(v["stats"]["tokens"], 0);
    assert!(v["stats"]["coverage"].is_null());
}

#[tokio::test]
async fn malformed_json_is_400() {
    for body in ["{", "[]", "{\"txt\": \"a\"}", "{\"text\": 3}", ""] {
        let (status, _, _) = send(app(), post_check(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body:?}");
    }
}

#[tokio::test]
async fn oversized_body_is_413() {
    let small = router(engine(), &ServiceConfig { max_body_bytes: 64, ..Default::default() });
    let body = serde_json::json!({ "text": "boat ".repeat(100) }).to_string();
    let (status, _, _) = send(small, post_check(body)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn wordlist_payload_and_caching() {
    let (status, headers, body) = send(app(), Request::get("/v1/wordlist").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["size"], 998);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 998);
    assert!(entries.iter().any(|e| e["surface"] == "television"));
    let etag = headers[header::ETAG].to_str().unwrap().to_string();
    assert_eq!(etag, format!("\"{}\"", v["version"].as_str().unwrap()));

    let (status2, headers2, body2) = send(app(), Request::get("/v1/wordlist").body(Body::empty()).unwrap()).await;
    assert_eq!(status2, StatusCode::OK);
    assert_eq!(headers2[header::ETAG], etag.as_str());
    assert_eq!(body, body2);

    let req = Request::get("/v1/wordlist")
        .header(header::IF_NONE_MATCH, &etag)
        .body(Body::empty())
        .unwrap();
    let (status, _, body) = send(app(), req).await;
    assert_eq!(status, StatusCode::NOT_MODIFIED);
    assert!(body.is_empty());

    let req = Request::get("/v1/wordlist")
        .header(header::IF_NONE_MATCH, "\"stale\"")
        .body(Body::empty())
        .unwrap();
    assert_eq!(send(app(), req).await.0, StatusCode::OK);
}

async fn expand(word: &str) -> (StatusCode, Value) {
    let (status, _, body) = send(app(), Request::get(format!("/v1/expand{word}")).body(Body::empty()).unwrap()).await;
    (status, serde_json::from_slice(&body).unwrap())
}

#[tokio::test]
async fn expand_endpoint() {
    let (status, v) = expand("?word=low").await;
    assert_eq!(status, StatusCode::OK);
    let surfaces: Vec<&str> = v["derivations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["surface"].as_str().unwrap())
        .collect();
    for s in ["lower", "lowering", "lowered"] {
        assert!(surfaces.contains(&s), "{s}");
    }
    let (_, v) = expand("?word=we").await;
    assert!(v["derivations"].as_array().unwrap().iter().any(|d| d["surface"] == "us" && d["rule"] == 9));
    assert_eq!(expand("?word=zzz").await.0, StatusCode::NOT_FOUND);
    assert_eq!(expand("").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(expand("?word=").await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn cors_preflight_is_answered() {
    let req = Request::options("/v1/check")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let (_, headers, _) = send(app(), req).await;
    assert_eq!(headers[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}

/// A 5000-word document mixing listed words, derived forms, extras,
/// punctuation and unknown words.
pub fn document() -> String {
    let e = engine();
    let surfaces = e.morphology().closure().ranked_surfaces();
    let extras = ["some", "mad", "worth", "xylophone", "spaceships", "quantum", "Don't", "an"];
    let mut words = Vec::with_capacity(5000);
    let mut state: u64 = 12345;
    for i in 0..5000 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let r = (state >> 33) as usize;
        let w = if i % 17 == 0 { extras[r % extras.len()].to_string() } else { surfaces[r % surfaces.len()].clone() };
        words.push(if i % 11 == 10 { format!("{w}.") } else { w });
    }
    words.join(" ")
}

#[tokio::test]
async fn check_is_deterministic_and_fast() {
    let text = document();
    assert_eq!(text.split_whitespace().count(), 5000);
    let body = serde_json::json!({ "text": text }).to_string();
    let app = app();
    let mut bodies = Vec::new();
    let mut slowest = Duration::ZERO;
    for _ in 0..10 {
        let started = Instant::now();
        let (status, _, out) = send(app.clone(), post_check(body.clone())).await;
        slowest = slowest.max(started.elapsed());
        assert_eq!(status, StatusCode::OK);
        bodies.push(out);
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
    assert!(slowest < Duration::from_millis(200), "{slowest:?}");
}

fn assert_valid(name: &str, doc: &Value) {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[tokio::test]
async fn responses_match_published_schemas() {
    assert_valid("service-check.schema.json", &check("Some xylophones lower the colorful TV.").await);
    assert_valid("service-check.schema.json", &check("").await);
    let (_, _, body) = send(app(), Request::get("/v1/wordlist").body(Body::empty()).unwrap()).await;
    assert_valid("service-wordlist.schema.json", &serde_json::from_slice(&body).unwrap());
    assert_valid("service-expand.schema.json", &expand("?word=think").await.1);
}
