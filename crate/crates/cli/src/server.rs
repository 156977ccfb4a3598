//! JSON API over the live session store.

use std::collections::HashMap;
use std::fs;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use newsrec_core::agent::QTable;
use newsrec_core::corpus::Article;
use newsrec_core::pipeline::{build_pool, feature_rows, read_scored_file};
use newsrec_core::service::{
    Catalog, FeedbackEvent, FeedbackOutcome, Recommendation, SessionStore, Snapshot,
};
use newsrec_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::commands::{load_model, load_qtable, ServeArgs};

pub struct AppState {
    pub store: SessionStore,
    pub report: Option<Value>,
}

impl AppState {
    pub fn new(catalog: Catalog, seed: u64, report: Option<Value>) -> Self {
        AppState {
            store: SessionStore::new(catalog, seed),
            report,
        }
    }
}

pub fn load_state(a: &ServeArgs) -> Result<AppState> {
    let scored = read_scored_file(&a.input)?;
    let model = load_model(&a.model)?;
    let pool = build_pool(&model, &feature_rows(&scored))?;
    let base_qtable = match &a.qtable {
        Some(p) => load_qtable(p)?,
        None => QTable::zero(),
    };
    let report = match &a.report {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?)
        }
        None => None,
    };
    let articles: HashMap<u64, Article> =
        scored.into_iter().map(|s| (s.article.id, s.article)).collect();
    let catalog = Catalog {
        pool,
        articles,
        base_qtable,
        alpha: a.alpha,
        gamma: a.gamma,
    };
    Ok(AppState::new(catalog, a.seed, report))
}

pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            Error::UnknownSession(_) => StatusCode::NOT_FOUND,
            Error::Conflict(_) | Error::Empty(_) => StatusCode::CONFLICT,
            Error::Config(_) | Error::NonFinite(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let mut message = self.0.to_string();
        let mut source = std::error::Error::source(&self.0);
        while let Some(cause) = source {
            message.push_str(&format!(": {cause}"));
            source = cause.source();
        }
        (status, Json(json!({ "error": message }))).into_response()
    }
}

type Shared = Arc<AppState>;
type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

#[derive(Serialize)]
struct Created {
    session_id: String,
}

async fn create_session(State(state): State<Shared>) -> std::result::Result<(StatusCode, Json<Created>), ApiError> {
    let id = state.store.create(uuid::Uuid::new_v4().to_string())?;
    Ok((StatusCode::CREATED, Json(Created { session_id: id })))
}

async fn next(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Recommendation> {
    Ok(Json(state.store.next_recommendation(&id)?))
}

async fn feedback(
    State(state): State<Shared>,
    Path(id): Path<String>,
    Json(event): Json<FeedbackEvent>,
) -> ApiResult<FeedbackOutcome> {
    Ok(Json(state.store.apply_feedback(&id, &event)?))
}

async fn qtable(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Snapshot> {
    Ok(Json(state.store.snapshot(&id)?))
}

async fn report(State(state): State<Shared>) -> Response {
    match &state.report {
        Some(r) => Json(r.clone()).into_response(),
        None => (
            StatusCode::NOT_FOUND,
            Json(json!({ "error": "no evaluation report loaded" })),
        )
            .into_response(),
    }
}

pub fn router(state: Shared, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/session", post(create_session))
        .route("/api/session/{id}/next", get(next))
        .route("/api/session/{id}/feedback", post(feedback))
        .route("/api/session/{id}/qtable", get(qtable))
        .route("/api/report", get(report))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(
    state: AppState,
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
    sessions_out: Option<PathBuf>,
) -> Result<()> {
    let state = Arc::new(state);
    let app = router(state.clone(), static_dir);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = sessions_out {
        fs::write(&path, state.store.to_json()?)
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("saved {} sessions to {}", state.store.len(), path.display());
    }
    Ok(())
}
