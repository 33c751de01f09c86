use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use mosaic_core::service::{SearchIndex, ServiceError};
use serde::{Deserialize, Serialize};
use tower_http::services::{ServeDir, ServeFile};

use crate::server::{spawn, NetError, ServerHandle};

#[derive(Debug, Deserialize)]
struct SearchParams {
    #[serde(default)]
    name: String,
    location: Option<String>,
    page: Option<usize>,
}

#[derive(Serialize)]
struct ApiError {
    error: String,
}

fn fail(status: StatusCode, e: impl ToString) -> Response {
    (status, Json(ApiError { error: e.to_string() })).into_response()
}

fn service_error(e: ServiceError) -> Response {
    let status = match e {
        ServiceError::EmptyQuery => StatusCode::BAD_REQUEST,
        ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    };
    fail(status, e)
}

async fn search(State(idx): State<Arc<SearchIndex>>, Query(p): Query<SearchParams>) -> Response {
    match idx.search(&p.name, p.location.as_deref(), p.page.unwrap_or(1)) {
        Ok(r) => Json(r).into_response(),
        Err(e) => service_error(e),
    }
}

async fn dossier(State(idx): State<Arc<SearchIndex>>, Path(id): Path<String>) -> Response {
    match idx.get_dossier(&id) {
        Ok(v) => Json(v).into_response(),
        Err(e) => service_error(e),
    }
}

async fn stats(State(idx): State<Arc<SearchIndex>>) -> Response {
    Json(idx.stats()).into_response()
}

async fn api_not_found() -> Response {
    fail(StatusCode::NOT_FOUND, "no such endpoint")
}

/// JSON API under `/api`; with `static_dir`, everything else is served from
/// it and unknown paths fall back to its `index.html`.
pub fn api_router(index: Arc<SearchIndex>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/search", get(search))
        .route("/dossier/{id}", get(dossier))
        .route("/stats", get(stats))
        .fallback(api_not_found)
        .with_state(index);
    let router = Router::new().nest("/api", api);
    match static_dir {
        Some(dir) => {
            let index_html = dir.join("index.html");
            router.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(index_html)))
        }
        None => router,
    }
}

pub fn serve_api(index: Arc<SearchIndex>, static_dir: Option<PathBuf>, addr: SocketAddr) -> Result<ServerHandle, NetError> {
    spawn(addr, api_router(index, static_dir))
}
