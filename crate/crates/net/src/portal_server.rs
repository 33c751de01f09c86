use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{ConnectInfo, State};
use axum::http::{header, HeaderValue, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use mosaic_core::portal::Portal;

use crate::server::{spawn, NetError, ServerHandle};

/// Exact wait in milliseconds, sent next to the whole-second `Retry-After`.
pub const RETRY_AFTER_MS_HEADER: &str = "x-retry-after-ms";

async fn answer(
    State(portal): State<Arc<Portal>>,
    ConnectInfo(peer): ConnectInfo<SocketAddr>,
    uri: Uri,
) -> Response {
    let latency = portal.config().latency_ms;
    if latency > 0 {
        tokio::time::sleep(Duration::from_millis(latency)).await;
    }
    let target = uri.path_and_query().map_or("/", |pq| pq.as_str()).to_string();
    let client = peer.ip().to_string();
    let r = portal.handle(&client, &target);

    let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    let mut resp = (status, [(header::CONTENT_TYPE, "text/html; charset=utf-8")], r.body).into_response();
    if let Some(wait) = r.retry_after {
        let h = resp.headers_mut();
        let secs = wait.as_secs() + u64::from(wait.subsec_nanos() > 0);
        h.insert(header::RETRY_AFTER, HeaderValue::from(secs));
        h.insert(RETRY_AFTER_MS_HEADER, HeaderValue::from(wait.as_millis().max(1) as u64));
    }
    resp
}

pub fn portal_router(portal: Arc<Portal>) -> Router {
    Router::new().fallback(answer).with_state(portal)
}

/// Serves `portal` on `addr`; port 0 picks a free port.
pub fn serve_portal(portal: Arc<Portal>, addr: SocketAddr) -> Result<ServerHandle, NetError> {
    spawn(addr, portal_router(portal))
}
