use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fuzzy_refine_core::Modifier;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::error::ServiceError;
use crate::session::{SessionConfig, SessionSummary};
use crate::store::SessionStore;

pub const DEFAULT_POLL_MS: u64 = 25_000;
pub const MAX_POLL_MS: u64 = 60_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status =
            StatusCode::from_u16(self.http_status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        if status.is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        let body = ErrorBody {
            code: self.code().to_string(),
            message: self.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ServiceError>;
type Store = State<Arc<SessionStore>>;

fn parse<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ServiceError::Malformed(e.to_string()))
}

fn parse_id(raw: &str) -> ApiResult<Uuid> {
    Uuid::parse_str(raw).map_err(|_| ServiceError::Malformed(format!("bad session id `{raw}`")))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(summary))
        .route("/sessions/{id}/modifiers", post(modifier))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/confirm", post(confirm))
        .route("/sessions/{id}/abandon", post(abandon))
        .route("/sessions/{id}/history", get(history))
        .route("/sessions/{id}/events", get(events))
        .route("/sessions/{id}/poll", get(poll))
        .with_state(store)
}

async fn create(State(store): Store, body: Bytes) -> ApiResult<(StatusCode, Json<SessionSummary>)> {
    let config: SessionConfig = parse(&body)?;
    Ok((StatusCode::CREATED, Json(store.create(config)?)))
}

async fn summary(State(store): Store, Path(id): Path<String>) -> ApiResult<Json<SessionSummary>> {
    Ok(Json(store.summary(parse_id(&id)?)?))
}

async fn modifier(
    State(store): Store,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<SessionSummary>> {
    let id = parse_id(&id)?;
    let m: Modifier = parse(&body)?;
    Ok(Json(store.apply_modifier(id, m)?))
}

async fn undo(State(store): Store, Path(id): Path<String>) -> ApiResult<Json<SessionSummary>> {
    Ok(Json(store.undo(parse_id(&id)?)?))
}

async fn confirm(State(store): Store, Path(id): Path<String>) -> ApiResult<Json<SessionSummary>> {
    Ok(Json(store.confirm(parse_id(&id)?)?))
}

async fn abandon(State(store): Store, Path(id): Path<String>) -> ApiResult<Json<SessionSummary>> {
    Ok(Json(store.abandon(parse_id(&id)?)?))
}

async fn history(State(store): Store, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(store.history(parse_id(&id)?)?))
}

async fn events(State(store): Store, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(store.events(parse_id(&id)?)?))
}

#[derive(Debug, Deserialize)]
struct PollParams {
    /// Return as soon as the session version exceeds this.
    after: Option<u64>,
    timeout_ms: Option<u64>,
}

/// Long-poll: waits until the session changes past `after` (or times out)
/// and returns the current summary either way.
async fn poll(
    State(store): Store,
    Path(id): Path<String>,
    Query(params): Query<PollParams>,
) -> ApiResult<Json<SessionSummary>> {
    let id = parse_id(&id)?;
    let mut rx = store.subscribe(id)?;
    let after = params.after.unwrap_or(0);
    let timeout = Duration::from_millis(params.timeout_ms.unwrap_or(DEFAULT_POLL_MS).min(MAX_POLL_MS));
    let wait = rx.wait_for(|s| s.version > after);
    if let Ok(Ok(s)) = tokio::time::timeout(timeout, wait).await {
        return Ok(Json(s.clone()));
    }
    Ok(Json(store.summary(id)?))
}

/// Serves the API until ctrl-c.
pub async fn serve(addr: SocketAddr, store: Arc<SessionStore>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
