#![allow(dead_code)]

use std::path::PathBuf;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use mgcolor_service::{router, state, ServiceConfig};
use serde_json::Value;
use tower::ServiceExt;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap()
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

pub fn app() -> Router {
    app_with(ServiceConfig::default())
}

pub fn app_with(config: ServiceConfig) -> Router {
    router(state(&config).unwrap(), config.ui_dir.clone())
}

pub fn short_ttl(ttl: Duration) -> ServiceConfig {
    ServiceConfig { ttl, ..ServiceConfig::default() }
}

pub struct Reply {
    pub status: StatusCode,
    pub text: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.text).unwrap_or_else(|e| panic!("{e}: {}", self.text))
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<String>) -> Reply {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply { status, text: String::from_utf8(bytes.to_vec()).unwrap() }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, None).await
}

pub async fn post(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, Method::POST, uri, Some(body.to_string())).await
}

/// Creates a session and returns its id.
pub async fn create(app: &Router, upload: &str) -> String {
    let r = call(app, Method::POST, "/sessions", Some(upload.to_string())).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text);
    r.json()["id"].as_str().unwrap().to_string()
}

pub async fn export(app: &Router, id: &str) -> String {
    let r = get(app, &format!("/sessions/{id}/export")).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text);
    r.text
}

pub fn same_json(a: &str, b: &str) -> bool {
    let a: Value = serde_json::from_str(a).unwrap();
    let b: Value = serde_json::from_str(b).unwrap();
    mgcolor_core::json_diff::semantically_equal(&a, &b, 1e-9)
}
