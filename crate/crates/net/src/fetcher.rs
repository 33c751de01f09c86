use std::time::Duration;

use mosaic_core::harvest::{FetchError, Fetcher};
use mosaic_core::portal::PortalResponse;
use ureq::Agent;

use crate::portal_server::RETRY_AFTER_MS_HEADER;

/// Blocking HTTP client for a portal server.
#[derive(Debug, Clone)]
pub struct HttpFetcher {
    base: String,
    agent: Agent,
}

impl HttpFetcher {
    pub fn new(base_url: &str) -> Self {
        Self::with_timeout(base_url, Duration::from_secs(30))
    }

    pub fn with_timeout(base_url: &str, timeout: Duration) -> Self {
        let agent: Agent = Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self {
            base: base_url.trim_end_matches('/').to_string(),
            agent,
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }
}

fn retry_after(resp: &ureq::http::Response<ureq::Body>) -> Option<Duration> {
    let h = resp.headers();
    if let Some(ms) = h.get(RETRY_AFTER_MS_HEADER).and_then(|v| v.to_str().ok()?.parse::<u64>().ok()) {
        return Some(Duration::from_millis(ms));
    }
    h.get("retry-after")
        .and_then(|v| v.to_str().ok()?.trim().parse::<u64>().ok())
        .map(Duration::from_secs)
}

impl Fetcher for HttpFetcher {
    fn get(&self, path_and_query: &str) -> Result<PortalResponse, FetchError> {
        let url = format!("{}{path_and_query}", self.base);
        let mut resp = self.agent.get(&url).call().map_err(|e| FetchError(e.to_string()))?;
        let status = resp.status().as_u16();
        let retry_after = retry_after(&resp);
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| FetchError(e.to_string()))?;
        Ok(PortalResponse {
            status,
            body,
            retry_after,
        })
    }
}
