//! HTTP API over the embedding engine.
//!
//! | method | path            | body                 | response                               |
//! |--------|-----------------|----------------------|----------------------------------------|
//! | GET    | `/api/datasets` |                      | `[{id, name, m, n}]`                   |
//! | POST   | `/api/datasets` | dataset CSV or JSON  | `201 {id}`                             |
//! | POST   | `/api/embed`    | [`EmbedRequest`]     | `{coordinates, stress_trace, timing_ms}` |
//! | POST   | `/api/sweep`    | [`SweepRequest`]     | `{dims, stresses, normalized_stresses, timing_ms}` |
//!
//! Errors come back as `{"error": {"code", "message"}}` with status 400
//! (bad input), 404 (unknown dataset), 422 (method precondition), 500
//! (numeric failure) or 504 (time limit).

mod error;
mod request;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, Method as HttpMethod, StatusCode};
use axum::routing::get;
use axum::{Json, Router};
use bifold_core::render::CoordinatesDoc;
use bifold_core::{embed, sweep, SweepResult};
use serde::Serialize;
use tokio::sync::RwLock;
use tower_http::cors::{Any, CorsLayer};

pub use error::ApiError;
pub use request::{EmbedRequest, SweepRequest};
pub use store::{DatasetStore, DatasetSummary};

const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Clone)]
pub struct AppState {
    store: Arc<RwLock<DatasetStore>>,
    timeout: Duration,
}

impl AppState {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            store: Arc::new(RwLock::new(DatasetStore::new(dir))),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

#[derive(Debug, Serialize)]
pub struct EmbedResponse {
    pub coordinates: CoordinatesDoc,
    pub stress_trace: Vec<f64>,
    pub timing_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepResponse {
    #[serde(flatten)]
    pub result: SweepResult,
    pub timing_ms: f64,
}

pub fn router(state: AppState) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([HttpMethod::GET, HttpMethod::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/datasets", get(list_datasets).post(upload_dataset))
        .route("/api/embed", axum::routing::post(embed_handler))
        .route("/api/sweep", axum::routing::post(sweep_handler))
        .layer(cors)
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state)).await
}

async fn list_datasets(State(state): State<AppState>) -> Result<Json<Vec<DatasetSummary>>, ApiError> {
    let store = state.store.read().await;
    Ok(Json(store.list()?))
}

async fn upload_dataset(State(state): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<serde_json::Value>), ApiError> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::BadRequest(format!("body is not UTF-8: {e}")))?;
    let store = state.store.write().await;
    let id = store.insert(text)?;
    Ok((StatusCode::CREATED, Json(serde_json::json!({ "id": id }))))
}

/// Runs blocking engine work off the async executor, bounded by the
/// configured time limit.
// TODO: the solver has no cancellation hook, so a timed-out task keeps its
// blocking thread until it finishes on its own.
async fn run_limited<T: Send + 'static>(
    timeout: Duration,
    work: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    match tokio::time::timeout(timeout, tokio::task::spawn_blocking(work)).await {
        Ok(Ok(result)) => result,
        Ok(Err(join)) => Err(ApiError::Internal(format!("embedding task failed: {join}"))),
        Err(_) => Err(ApiError::Timeout(timeout)),
    }
}

async fn embed_handler(State(state): State<AppState>, body: Bytes) -> Result<Json<EmbedResponse>, ApiError> {
    let request: EmbedRequest = request::parse_body(&body)?;
    let dataset = request.source.resolve(&*state.store.read().await)?;
    let (method, params, options, cfg) = request.settings.resolve(&dataset)?;
    let response = run_limited(state.timeout, move || {
        let start = Instant::now();
        let result = embed(&dataset, method, params, options, &cfg)?;
        let timing_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(EmbedResponse {
            coordinates: CoordinatesDoc::new(&result, &dataset, method, params)?,
            stress_trace: result.stress_trace,
            timing_ms,
        })
    })
    .await?;
    Ok(Json(response))
}

async fn sweep_handler(State(state): State<AppState>, body: Bytes) -> Result<Json<SweepResponse>, ApiError> {
    let request: SweepRequest = request::parse_body(&body)?;
    let dataset = request.source.resolve(&*state.store.read().await)?;
    let (method, params, options, cfg) = request.settings.resolve(&dataset)?;
    let dims = request.dims;
    let response = run_limited(state.timeout, move || {
        let start = Instant::now();
        let result = sweep(&dataset, method, params, options, &cfg, &dims)?;
        Ok(SweepResponse {
            result,
            timing_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    })
    .await?;
    Ok(Json(response))
}
