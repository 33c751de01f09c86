//! HTTP front ends over `mosaic-core`.
//!
//! * [`serve_portal`] puts a [`Portal`](mosaic_core::portal::Portal) on a TCP
//!   port, one limiter bucket per client IP.
//! * [`HttpFetcher`] is the blocking [`Fetcher`](mosaic_core::harvest::Fetcher)
//!   the harvester uses against such a server.
//! * [`serve_api`] exposes a [`SearchIndex`](mosaic_core::service::SearchIndex)
//!   as JSON and optionally serves the UI bundle from a directory.
//!
//! Servers run on their own tokio runtime in a background thread, so callers
//! stay fully synchronous.

mod api;
mod fetcher;
mod portal_server;
mod server;

pub use api::{api_router, serve_api};
pub use fetcher::HttpFetcher;
pub use portal_server::{portal_router, serve_portal, RETRY_AFTER_MS_HEADER};
pub use server::{NetError, ServerHandle};
