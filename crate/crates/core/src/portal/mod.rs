//! In-process model of the four government portals.
//!
//! [`Portal::handle`] maps a request path plus query string to an HTML
//! response. The HTTP server in `mosaic-net` is a thin shell around it, and
//! the harvester can talk to it directly through [`crate::harvest::LocalPortal`].

mod limiter;
mod render;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{normalize_name, DlNumber, LicenceRecord, PanRecord, PhoneRecord, Source, VoterRecord};
use crate::synth::Corpus;

pub use limiter::{Clock, ManualClock, SystemClock, TokenBucketLimiter};
pub use render::{
    escape, extract_token, render_captcha_page, render_challenge_page, render_dl_page,
    render_error_page, render_pan_page, render_phone_page, render_throttled_page,
    render_voter_page, CHALLENGE_MARKER, DL_LABELS, NO_RECORDS, PAN_LABELS, PHONE_LABELS,
    TRUNCATION_MARKER, VOTER_LABELS,
};

pub const DEFAULT_ROW_CAP: usize = 500;

#[derive(Debug, Error)]
pub enum PortalError {
    #[error("corpus missing at {0}")]
    CorpusMissing(PathBuf),
    #[error("port {0} already in use")]
    PortInUse(u16),
    #[error("invalid portal config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Read(#[from] crate::jsonl::JsonlError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortalConfig {
    pub corpus: PathBuf,
    pub port: u16,
    /// Requests per second per client and portal; 0 disables throttling.
    pub rate_limit: f64,
    pub captcha_required: bool,
    pub latency_ms: u64,
    pub row_cap: usize,
}

impl Default for PortalConfig {
    fn default() -> Self {
        Self {
            corpus: PathBuf::from("corpus"),
            port: 8080,
            rate_limit: 0.0,
            captcha_required: false,
            latency_ms: 0,
            row_cap: DEFAULT_ROW_CAP,
        }
    }
}

impl PortalConfig {
    pub fn validate(&self) -> Result<(), PortalError> {
        if !self.rate_limit.is_finite() || self.rate_limit < 0.0 {
            return Err(PortalError::InvalidConfig(format!(
                "rate_limit {} must be >= 0",
                self.rate_limit
            )));
        }
        if self.row_cap == 0 {
            return Err(PortalError::InvalidConfig("row_cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortalResponse {
    pub status: u16,
    pub body: String,
    pub retry_after: Option<Duration>,
}

impl PortalResponse {
    fn ok(body: String) -> Self {
        Self {
            status: 200,
            body,
            retry_after: None,
        }
    }

    fn error(status: u16, message: &str) -> Self {
        Self {
            status,
            body: render_error_page(status, message),
            retry_after: None,
        }
    }
}

/// Read-only lookup structures over a corpus.
#[derive(Debug, Default)]
pub struct PortalIndex {
    licences: HashMap<DlNumber, LicenceRecord>,
    voters: BTreeMap<u8, Vec<(String, VoterRecord)>>,
    pans: HashMap<(String, String, NaiveDate), PanRecord>,
    phones: Vec<(String, PhoneRecord)>,
}

impl PortalIndex {
    pub fn new(corpus: &Corpus) -> Self {
        let licences = corpus
            .licences
            .iter()
            .map(|l| (l.dl_number, l.clone()))
            .collect();
        let mut voters: BTreeMap<u8, Vec<(String, VoterRecord)>> = BTreeMap::new();
        for v in &corpus.voters {
            voters
                .entry(v.constituency)
                .or_default()
                .push((normalize_name(&v.name).joined(), v.clone()));
        }
        for rows in voters.values_mut() {
            rows.sort_by(|a, b| (&a.0, &a.1.voter_id).cmp(&(&b.0, &b.1.voter_id)));
        }
        let mut pans: HashMap<(String, String, NaiveDate), PanRecord> = HashMap::new();
        for p in &corpus.pans {
            let Some(key) = pan_key(&p.name, p.dob) else { continue };
            match pans.get(&key) {
                Some(existing) if existing.pan <= p.pan => {}
                _ => {
                    pans.insert(key, p.clone());
                }
            }
        }
        let mut phones: Vec<(String, PhoneRecord)> = corpus
            .phones
            .iter()
            .map(|p| (normalize_name(&p.name).joined(), p.clone()))
            .collect();
        phones.sort_by(|a, b| (&a.0, &a.1.phone).cmp(&(&b.0, &b.1.phone)));
        Self {
            licences,
            voters,
            pans,
            phones,
        }
    }

    pub fn licence(&self, number: &DlNumber) -> Option<&LicenceRecord> {
        self.licences.get(number)
    }

    /// Voters of one constituency whose normalised name starts with `prefix`,
    /// capped at `cap`. The flag reports whether rows were cut.
    pub fn voters_by_prefix(&self, constituency: u8, prefix: &str, cap: usize) -> (Vec<VoterRecord>, bool) {
        let rows = self.voters.get(&constituency).map(Vec::as_slice).unwrap_or(&[]);
        prefix_slice(rows, prefix, cap)
    }

    pub fn pan(&self, first: &str, last: &str, dob: NaiveDate) -> Option<&PanRecord> {
        let first = normalize_name(first).joined();
        let last = normalize_name(last).joined();
        self.pans.get(&(first, last, dob))
    }

    pub fn phones_by_prefix(&self, prefix: &str, cap: usize) -> (Vec<PhoneRecord>, bool) {
        prefix_slice(&self.phones, prefix, cap)
    }
}

/// (first token, last token, dob) of a PAN holder.
pub fn pan_key(name: &str, dob: NaiveDate) -> Option<(String, String, NaiveDate)> {
    let n = normalize_name(name);
    Some((n.first()?.to_string(), n.last()?.to_string(), dob))
}

/// Portal prefix semantics: uppercase, leading blanks dropped, otherwise literal
/// (a trailing space narrows to whole first names).
pub fn normalize_prefix(raw: &str) -> String {
    raw.trim_start().to_ascii_uppercase()
}

fn prefix_slice<T: Clone>(rows: &[(String, T)], prefix: &str, cap: usize) -> (Vec<T>, bool) {
    let start = rows.partition_point(|(k, _)| k.as_str() < prefix);
    let matching = rows[start..]
        .iter()
        .take_while(|(k, _)| k.starts_with(prefix));
    let mut out = Vec::new();
    let mut truncated = false;
    for (_, r) in matching {
        if out.len() == cap {
            truncated = true;
            break;
        }
        out.push(r.clone());
    }
    (out, truncated)
}

#[derive(Debug, Default)]
struct CaptchaGate {
    issued: Mutex<HashSet<String>>,
    counter: AtomicU64,
}

impl CaptchaGate {
    fn issue(&self) -> String {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        // splitmix64 scramble of the counter
        let mut z = n.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        let token = format!("{:012X}", z & 0xFFFF_FFFF_FFFF);
        self.issued.lock().expect("captcha lock").insert(token.clone());
        token
    }

    fn valid(&self, token: Option<&str>) -> bool {
        token.is_some_and(|t| self.issued.lock().expect("captcha lock").contains(t))
    }
}

pub struct Portal {
    index: PortalIndex,
    config: PortalConfig,
    limiter: TokenBucketLimiter,
    captcha: CaptchaGate,
}

impl std::fmt::Debug for Portal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Portal").field("config", &self.config).finish()
    }
}

impl Portal {
    pub fn new(corpus: &Corpus, config: PortalConfig) -> Result<Self, PortalError> {
        Self::with_clock(corpus, config, Arc::new(SystemClock::default()))
    }

    pub fn with_clock(corpus: &Corpus, config: PortalConfig, clock: Arc<dyn Clock>) -> Result<Self, PortalError> {
        config.validate()?;
        Ok(Self {
            index: PortalIndex::new(corpus),
            limiter: TokenBucketLimiter::new(config.rate_limit, clock),
            captcha: CaptchaGate::default(),
            config,
        })
    }

    /// Loads the corpus named in the config.
    pub fn load(config: PortalConfig) -> Result<Self, PortalError> {
        if !corpus_present(&config.corpus) {
            return Err(PortalError::CorpusMissing(config.corpus.clone()));
        }
        let corpus = Corpus::read_dir(&config.corpus)?;
        Self::new(&corpus, config)
    }

    pub fn config(&self) -> &PortalConfig {
        &self.config
    }

    pub fn index(&self) -> &PortalIndex {
        &self.index
    }

    /// Answers one request. `client` identifies the caller for throttling.
    pub fn handle(&self, client: &str, path_and_query: &str) -> PortalResponse {
        let (path, query) = path_and_query
            .split_once('?')
            .unwrap_or((path_and_query, ""));
        let params: HashMap<String, String> = url::form_urlencoded::parse(query.as_bytes())
            .into_owned()
            .collect();
        let path = path.trim_end_matches('/');
        let portal = match path {
            "/dl" => Some(Source::Dl),
            "/voter" => Some(Source::Voter),
            "/pan" => Some(Source::Pan),
            "/phone" => Some(Source::Phone),
            "/captcha" => None,
            _ => return PortalResponse::error(404, "Page not found"),
        };
        let bucket = format!("{client}|{}", portal.map_or("captcha", Source::as_str));
        if let Err(wait) = self.limiter.try_acquire(&bucket) {
            return PortalResponse {
                status: 429,
                body: render_throttled_page(wait.as_secs_f64()),
                retry_after: Some(wait),
            };
        }
        let Some(portal) = portal else {
            return PortalResponse::ok(render_captcha_page(&self.captcha.issue()));
        };
        if self.config.captcha_required && !self.captcha.valid(params.get("token").map(String::as_str)) {
            return PortalResponse {
                status: 403,
                body: render_challenge_page(&self.captcha.issue()),
                retry_after: None,
            };
        }
        let get = |k: &str| params.get(k).map(String::as_str).unwrap_or("");
        match portal {
            Source::Dl => match DlNumber::parse(get("number")) {
                Ok(n) => PortalResponse::ok(render_dl_page(self.index.licence(&n))),
                Err(_) => PortalResponse::ok(render_dl_page(None)),
            },
            Source::Voter => {
                let Ok(c) = get("constituency").trim().parse::<u8>() else {
                    return PortalResponse::error(400, "Select a constituency");
                };
                let prefix = normalize_prefix(get("name"));
                if prefix.is_empty() {
                    return PortalResponse::error(400, "Enter a name");
                }
                let (rows, truncated) = self.index.voters_by_prefix(c, &prefix, self.config.row_cap);
                PortalResponse::ok(render_voter_page(&rows, truncated))
            }
            Source::Pan => {
                let Ok(dob) = NaiveDate::parse_from_str(get("dob").trim(), "%Y-%m-%d") else {
                    return PortalResponse::error(400, "Enter date of birth as YYYY-MM-DD");
                };
                PortalResponse::ok(render_pan_page(self.index.pan(get("first"), get("last"), dob)))
            }
            Source::Phone => {
                let prefix = normalize_prefix(get("name"));
                if prefix.is_empty() {
                    return PortalResponse::error(400, "Enter a name");
                }
                let (rows, truncated) = self.index.phones_by_prefix(&prefix, self.config.row_cap);
                PortalResponse::ok(render_phone_page(&rows, truncated))
            }
            Source::Social => unreachable!("no social portal route"),
        }
    }
}

pub fn corpus_present(dir: &Path) -> bool {
    dir.is_dir() && dir.join(Source::Voter.file_name()).is_file()
}
