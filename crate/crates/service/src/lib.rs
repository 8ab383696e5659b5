//! HTTP/JSON session service.

pub mod error;
pub mod session;
pub mod store;
pub mod wire;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

pub use error::ApiError;
pub use session::{Session, SessionSettings};
pub use store::Store;
use wire::{EditBody, LogEntry, LoggedCommand, SelectBody};

pub const DEFAULT_TTL: Duration = Duration::from_secs(2 * 60 * 60);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    pub ttl: Duration,
    pub persist_dir: Option<PathBuf>,
    pub settings: SessionSettings,
    /// Static assets served at `/` when set.
    pub ui_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            ttl: DEFAULT_TTL,
            persist_dir: None,
            settings: SessionSettings::default(),
            ui_dir: None,
        }
    }
}

pub type AppState = Arc<Store>;

pub fn state(config: &ServiceConfig) -> std::io::Result<AppState> {
    Ok(Arc::new(Store::new(config.settings.clone(), config.ttl, config.persist_dir.clone())?))
}

pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/state", get(get_state))
        .route("/sessions/{id}/selection", post(select).get(get_selection))
        .route("/sessions/{id}/edits", post(edit))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/redo", post(redo))
        .route("/sessions/{id}/export", get(export))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    serve_on(listener, config).await
}

pub async fn serve_on(listener: tokio::net::TcpListener, config: ServiceConfig) -> std::io::Result<()> {
    let app = router(state(&config)?, config.ui_dir.clone());
    axum::serve(listener, app).await
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(e.to_string()))
}

async fn create_session(State(store): State<AppState>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let upload = std::str::from_utf8(&body).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let session = store.create(upload)?;
    Ok(Json(session.summary()))
}

#[derive(Debug, Deserialize)]
struct ViewQuery {
    zoom: Option<f64>,
    step: Option<f64>,
}

async fn get_state(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ViewQuery>,
) -> Result<Json<Value>, ApiError> {
    let session = store.get(&id)?;
    Ok(Json(session.state(q.zoom, q.step)?))
}

async fn get_selection(State(store): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    Ok(Json(store.get(&id)?.selection_json()))
}

async fn select(State(store): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let body: SelectBody = parse_body(&body)?;
    let preview = body.preview;
    let request = body.request()?;
    if preview {
        let session = store.get(&id)?;
        let group = session.resolve_selection(&request)?;
        return Ok(Json(session.selection_preview(group.as_ref())));
    }
    let value = store.update(&id, |s| Ok((s.select(&request)?, None))).await?;
    Ok(Json(value))
}

async fn edit(State(store): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Json<Value>, ApiError> {
    let body: EditBody = parse_body(&body)?;
    if body.preview {
        // Dry run on a private copy; nothing is stored or logged.
        let mut session = (*store.get(&id)?).clone();
        let command = session.command_for(&body.request)?;
        let outcome = session.apply(command)?;
        return Ok(Json(edit_response(&session, &outcome, true)));
    }
    let value = store
        .update(&id, |s| {
            let command = s.command_for(&body.request)?;
            let logged = LoggedCommand::from_kind(&command);
            let outcome = s.apply(command)?;
            Ok((edit_response(s, &outcome, false), Some(LogEntry::Edit { command: logged })))
        })
        .await?;
    Ok(Json(value))
}

fn edit_response(session: &Session, outcome: &mgcolor_core::recolor::EditOutcome, preview: bool) -> Value {
    let mut value = mgcolor_core::report::outcome_json(outcome);
    let obj = value.as_object_mut().expect("outcome is an object");
    obj.insert("preview".into(), json!(preview));
    obj.insert("edits".into(), json!(session.log.len()));
    obj.insert("playhead".into(), json!(session.playhead));
    obj.insert("selection".into(), session.selection_json());
    value
}

async fn undo(State(store): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let value = store.update(&id, |s| Ok((s.undo()?, Some(LogEntry::Undo)))).await?;
    Ok(Json(value))
}

async fn redo(State(store): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let value = store.update(&id, |s| Ok((s.redo()?, Some(LogEntry::Redo)))).await?;
    Ok(Json(value))
}

async fn export(State(store): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = store.get(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], session.export()).into_response())
}
