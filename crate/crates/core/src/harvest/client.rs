use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Condvar, Mutex, RwLock};
use std::thread;
use std::time::Duration;

use thiserror::Error;

use super::HarvestError;
use crate::portal::{extract_token, Portal, PortalResponse, CHALLENGE_MARKER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("transport error: {0}")]
pub struct FetchError(pub String);

/// Anything that can answer a portal request given its path and query.
pub trait Fetcher: Send + Sync {
    fn get(&self, path_and_query: &str) -> Result<PortalResponse, FetchError>;
}

impl<F: Fetcher + ?Sized> Fetcher for Arc<F> {
    fn get(&self, path_and_query: &str) -> Result<PortalResponse, FetchError> {
        (**self).get(path_and_query)
    }
}

/// Talks to a [`Portal`] in the same process, skipping HTTP.
#[derive(Debug, Clone)]
pub struct LocalPortal {
    portal: Arc<Portal>,
    client: String,
}

impl LocalPortal {
    pub fn new(portal: Arc<Portal>) -> Self {
        Self::with_client(portal, "local")
    }

    pub fn with_client(portal: Arc<Portal>, client: impl Into<String>) -> Self {
        Self {
            portal,
            client: client.into(),
        }
    }
}

impl Fetcher for LocalPortal {
    fn get(&self, path_and_query: &str) -> Result<PortalResponse, FetchError> {
        let latency = self.portal.config().latency_ms;
        if latency > 0 {
            thread::sleep(Duration::from_millis(latency));
        }
        Ok(self.portal.handle(&self.client, path_and_query))
    }
}

#[derive(Debug, Default)]
pub(crate) struct Counters {
    pub requests_sent: AtomicU64,
    pub throttle_events: AtomicU64,
    pub captcha_solves: AtomicU64,
    pub retries: AtomicU64,
    pub max_in_flight: AtomicU64,
}

#[derive(Debug)]
struct Semaphore {
    in_flight: Mutex<usize>,
    freed: Condvar,
    limit: usize,
}

impl Semaphore {
    fn acquire(&self) -> usize {
        let mut n = self.in_flight.lock().expect("semaphore lock");
        while *n >= self.limit {
            n = self.freed.wait(n).expect("semaphore lock");
        }
        *n += 1;
        *n
    }

    fn release(&self) {
        *self.in_flight.lock().expect("semaphore lock") -= 1;
        self.freed.notify_one();
    }
}

const MAX_ATTEMPTS: u32 = 3;
const MAX_CHALLENGES: u32 = 5;
const MAX_THROTTLES: u32 = 100_000;

/// Wraps a fetcher with the harvester's manners: bounded in-flight requests,
/// a pause after each success, waiting out throttles, echoing challenge
/// tokens and retrying transport failures with exponential backoff.
pub struct PoliteClient<'a> {
    fetcher: &'a dyn Fetcher,
    gate: Semaphore,
    token: RwLock<Option<String>>,
    delay: Duration,
    pub(crate) counters: Counters,
}

impl<'a> PoliteClient<'a> {
    pub fn new(fetcher: &'a dyn Fetcher, concurrency: usize, politeness_delay: Duration) -> Self {
        Self {
            fetcher,
            gate: Semaphore {
                in_flight: Mutex::new(0),
                freed: Condvar::new(),
                limit: concurrency.max(1),
            },
            token: RwLock::new(None),
            delay: politeness_delay,
            counters: Counters::default(),
        }
    }

    fn send(&self, url: &str) -> Result<PortalResponse, FetchError> {
        let now = self.gate.acquire() as u64;
        self.counters.max_in_flight.fetch_max(now, Ordering::Relaxed);
        self.counters.requests_sent.fetch_add(1, Ordering::Relaxed);
        let out = self.fetcher.get(url);
        self.gate.release();
        out
    }

    /// Fetches `path` and returns the body of the eventual 200 page.
    pub fn fetch(&self, path: &str) -> Result<String, HarvestError> {
        let mut failures = 0;
        let mut challenges = 0;
        let mut throttles = 0;
        loop {
            let url = match self.token.read().expect("token lock").as_deref() {
                Some(t) => format!("{path}{}token={t}", if path.contains('?') { '&' } else { '?' }),
                None => path.to_string(),
            };
            let failure = match self.send(&url) {
                Ok(r) if r.status == 200 => {
                    if !self.delay.is_zero() {
                        thread::sleep(self.delay);
                    }
                    return Ok(r.body);
                }
                Ok(r) if r.status == 429 => {
                    self.counters.throttle_events.fetch_add(1, Ordering::Relaxed);
                    throttles += 1;
                    if throttles > MAX_THROTTLES {
                        return Err(HarvestError::PortalUnreachable {
                            query: path.to_string(),
                            reason: "throttled without end".into(),
                        });
                    }
                    let wait = r
                        .retry_after
                        .unwrap_or(self.delay.max(Duration::from_millis(50)));
                    thread::sleep(wait);
                    continue;
                }
                Ok(r) if r.status == 403 && r.body.contains(CHALLENGE_MARKER) => {
                    challenges += 1;
                    let Some(token) = extract_token(&r.body) else {
                        return Err(HarvestError::Rejected {
                            status: 403,
                            query: path.to_string(),
                        });
                    };
                    if challenges > MAX_CHALLENGES {
                        return Err(HarvestError::Rejected {
                            status: 403,
                            query: path.to_string(),
                        });
                    }
                    self.counters.captcha_solves.fetch_add(1, Ordering::Relaxed);
                    *self.token.write().expect("token lock") = Some(token);
                    continue;
                }
                Ok(r) if r.status >= 500 => format!("status {}", r.status),
                Ok(r) => {
                    return Err(HarvestError::Rejected {
                        status: r.status,
                        query: path.to_string(),
                    })
                }
                Err(e) => e.0,
            };
            failures += 1;
            if failures >= MAX_ATTEMPTS {
                return Err(HarvestError::PortalUnreachable {
                    query: path.to_string(),
                    reason: failure,
                });
            }
            self.counters.retries.fetch_add(1, Ordering::Relaxed);
            thread::sleep(self.delay * (1 << (failures - 1)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::AtomicUsize;

    struct Scripted {
        replies: Mutex<Vec<Result<PortalResponse, FetchError>>>,
        seen: Mutex<Vec<String>>,
    }

    impl Scripted {
        fn new(mut replies: Vec<Result<PortalResponse, FetchError>>) -> Self {
            replies.reverse();
            Self {
                replies: Mutex::new(replies),
                seen: Mutex::new(Vec::new()),
            }
        }
    }

    impl Fetcher for Scripted {
        fn get(&self, url: &str) -> Result<PortalResponse, FetchError> {
            self.seen.lock().unwrap().push(url.to_string());
            self.replies.lock().unwrap().pop().expect("script exhausted")
        }
    }

    fn page(status: u16, body: &str) -> Result<PortalResponse, FetchError> {
        Ok(PortalResponse {
            status,
            body: body.into(),
            retry_after: (status == 429).then(|| Duration::from_millis(1)),
        })
    }

    #[test]
    fn transient_failures_are_retried_then_given_up() {
        let f = Scripted::new(vec![Err(FetchError("reset".into())), page(503, ""), page(200, "ok")]);
        let c = PoliteClient::new(&f, 1, Duration::from_millis(1));
        assert_eq!(c.fetch("/dl?number=x").unwrap(), "ok");
        assert_eq!(c.counters.retries.load(Ordering::Relaxed), 2);

        let f = Scripted::new(vec![page(500, ""), page(502, ""), page(503, "")]);
        let c = PoliteClient::new(&f, 1, Duration::from_millis(1));
        assert!(matches!(c.fetch("/dl"), Err(HarvestError::PortalUnreachable { .. })));
    }

    #[test]
    fn throttles_do_not_count_as_failures() {
        let mut script: Vec<_> = (0..6).map(|_| page(429, "")).collect();
        script.push(page(200, "ok"));
        let f = Scripted::new(script);
        let c = PoliteClient::new(&f, 1, Duration::ZERO);
        assert_eq!(c.fetch("/voter").unwrap(), "ok");
        assert_eq!(c.counters.throttle_events.load(Ordering::Relaxed), 6);
    }

    #[test]
    fn challenge_token_is_echoed_and_reused() {
        let challenge = crate::portal::render_challenge_page("T0K3N");
        let f = Scripted::new(vec![page(403, &challenge), page(200, "a"), page(200, "b")]);
        let c = PoliteClient::new(&f, 1, Duration::ZERO);
        assert_eq!(c.fetch("/phone?name=A").unwrap(), "a");
        assert_eq!(c.fetch("/phone?name=B").unwrap(), "b");
        let seen = f.seen.lock().unwrap().clone();
        assert_eq!(seen, ["/phone?name=A", "/phone?name=A&token=T0K3N", "/phone?name=B&token=T0K3N"]);
        assert_eq!(c.counters.captcha_solves.load(Ordering::Relaxed), 1);
    }

    #[test]
    fn other_client_errors_are_not_retried() {
        let f = Scripted::new(vec![page(404, "")]);
        let c = PoliteClient::new(&f, 1, Duration::ZERO);
        assert!(matches!(c.fetch("/x"), Err(HarvestError::Rejected { status: 404, .. })));
    }

    struct Slow {
        live: AtomicUsize,
        peak: AtomicUsize,
    }

    impl Fetcher for Slow {
        fn get(&self, _: &str) -> Result<PortalResponse, FetchError> {
            let now = self.live.fetch_add(1, Ordering::SeqCst) + 1;
            self.peak.fetch_max(now, Ordering::SeqCst);
            thread::sleep(Duration::from_millis(2));
            self.live.fetch_sub(1, Ordering::SeqCst);
            page(200, "")
        }
    }

    #[test]
    fn in_flight_never_exceeds_limit() {
        let f = Slow {
            live: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
        };
        let c = PoliteClient::new(&f, 3, Duration::ZERO);
        thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| {
                    for _ in 0..10 {
                        c.fetch("/dl").unwrap();
                    }
                });
            }
        });
        assert!(f.peak.load(Ordering::SeqCst) <= 3);
        assert!(c.counters.max_in_flight.load(Ordering::Relaxed) <= 3);
    }
}
