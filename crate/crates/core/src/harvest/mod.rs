//! Query planning against the portals: sequential licence enumeration,
//! alphabet sweeps with prefix refinement, and licence-to-PAN chaining.

mod client;
mod ledger;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use chrono::{NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{normalize_name, DlNumber, LicenceRecord, Source, SourceRecord};
use crate::jsonl::JsonlError;
use crate::portal::normalize_prefix;
use crate::scrape::{parse_page, PageKind, ScrapeError};

pub use client::{FetchError, Fetcher, LocalPortal, PoliteClient};
pub use ledger::{HarvestStore, LedgerEntry, LEDGER_FILE, STATS_FILE};

/// Prefixes longer than this are never refined further.
pub const MAX_PREFIX_LEN: usize = 32;
const REFINE_ALPHABET: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ 0123456789";

#[derive(Debug, Error)]
pub enum HarvestError {
    #[error("portal unreachable for {query}: {reason}")]
    PortalUnreachable { query: String, reason: String },
    #[error("portal answered {status} to {query}")]
    Rejected { status: u16, query: String },
    #[error("could not parse answer to {query}: {source}")]
    Scrape {
        query: String,
        #[source]
        source: ScrapeError,
    },
    #[error("request budget exhausted after {} queries; partial results kept", .0.total_queries())]
    BudgetExhausted(Box<HarvestStats>),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Store(#[from] JsonlError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarvestPlan {
    pub dl_seeds: Vec<DlNumber>,
    pub dl_span: u32,
    pub voter_letters: Vec<char>,
    pub constituencies: Vec<u8>,
    pub chain_pan: bool,
    pub phone_letters: Vec<char>,
    /// Maximum number of queries; `None` is unlimited.
    pub request_budget: Option<u64>,
    pub concurrency: usize,
    pub politeness_delay_ms: u64,
}

impl Default for HarvestPlan {
    fn default() -> Self {
        Self {
            dl_seeds: (1..=5)
                .map(|rto| DlNumber::new(rto, 2010, 1).expect("valid seed"))
                .collect(),
            dl_span: 300,
            voter_letters: ('a'..='z').collect(),
            constituencies: (1..=70).collect(),
            chain_pan: true,
            phone_letters: ('a'..='z').collect(),
            request_budget: None,
            concurrency: 4,
            politeness_delay_ms: 50,
        }
    }
}

impl HarvestPlan {
    pub fn validate(&self) -> Result<(), HarvestError> {
        if self.concurrency == 0 {
            return Err(HarvestError::InvalidPlan("concurrency must be at least 1".into()));
        }
        let bad = self
            .voter_letters
            .iter()
            .chain(&self.phone_letters)
            .find(|c| !c.is_ascii_alphanumeric());
        if let Some(c) = bad {
            return Err(HarvestError::InvalidPlan(format!("letter {c:?} is not alphanumeric")));
        }
        Ok(())
    }

    fn politeness_delay(&self) -> Duration {
        Duration::from_millis(self.politeness_delay_ms)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HarvestStats {
    pub queries_issued: BTreeMap<Source, u64>,
    pub records_stored: BTreeMap<Source, u64>,
    /// Queries found in the ledger and skipped.
    pub queries_resumed: u64,
    pub requests_sent: u64,
    pub throttle_events: u64,
    pub captcha_solves: u64,
    pub retries: u64,
    pub max_in_flight: u64,
    pub refinements: u64,
    /// Truncated pages that hit [`MAX_PREFIX_LEN`] and could not be refined.
    pub unrefined_truncations: u64,
    pub budget_exhausted: bool,
    pub wall_time_secs: f64,
}

impl HarvestStats {
    pub fn total_queries(&self) -> u64 {
        self.queries_issued.values().sum()
    }

    pub fn total_stored(&self) -> u64 {
        self.records_stored.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Query {
    Dl(DlNumber),
    Voter { constituency: u8, prefix: String },
    Pan {
        first: String,
        last: String,
        dob: NaiveDate,
        from: DlNumber,
    },
    Phone { prefix: String },
}

impl Query {
    fn source(&self) -> Source {
        match self {
            Query::Dl(_) => Source::Dl,
            Query::Voter { .. } => Source::Voter,
            Query::Pan { .. } => Source::Pan,
            Query::Phone { .. } => Source::Phone,
        }
    }

    fn kind(&self) -> PageKind {
        match self {
            Query::Dl(_) => PageKind::Dl,
            Query::Voter { .. } => PageKind::Voter,
            Query::Pan { .. } => PageKind::Pan,
            Query::Phone { .. } => PageKind::Phone,
        }
    }

    fn key(&self) -> String {
        match self {
            Query::Dl(n) => format!("dl:{n}"),
            Query::Voter { constituency, prefix } => format!("voter:{constituency}:{prefix}"),
            Query::Pan { first, last, dob, .. } => format!("pan:{first}:{last}:{dob}"),
            Query::Phone { prefix } => format!("phone:{prefix}"),
        }
    }

    fn path(&self) -> String {
        let mut q = url::form_urlencoded::Serializer::new(String::new());
        let route = match self {
            Query::Dl(n) => {
                q.append_pair("number", &n.to_string());
                "/dl"
            }
            Query::Voter { constituency, prefix } => {
                q.append_pair("constituency", &constituency.to_string());
                q.append_pair("name", prefix);
                "/voter"
            }
            Query::Pan { first, last, dob, .. } => {
                q.append_pair("first", first);
                q.append_pair("last", last);
                q.append_pair("dob", &dob.format("%Y-%m-%d").to_string());
                "/pan"
            }
            Query::Phone { prefix } => {
                q.append_pair("name", prefix);
                "/phone"
            }
        };
        format!("{route}?{}", q.finish())
    }

    fn chained_from(&self) -> Option<DlNumber> {
        match self {
            Query::Pan { from, .. } => Some(*from),
            _ => None,
        }
    }

    fn refine(&self) -> Vec<Query> {
        let children = |prefix: &str| -> Vec<String> {
            REFINE_ALPHABET
                .chars()
                .filter(|&c| !(c == ' ' && prefix.ends_with(' ')))
                .map(|c| format!("{prefix}{c}"))
                .collect()
        };
        match self {
            Query::Voter { constituency, prefix } => children(prefix)
                .into_iter()
                .map(|prefix| Query::Voter {
                    constituency: *constituency,
                    prefix,
                })
                .collect(),
            Query::Phone { prefix } => children(prefix)
                .into_iter()
                .map(|prefix| Query::Phone { prefix })
                .collect(),
            _ => Vec::new(),
        }
    }

    fn refinable(&self) -> bool {
        match self {
            Query::Voter { prefix, .. } | Query::Phone { prefix } => prefix.len() < MAX_PREFIX_LEN,
            _ => false,
        }
    }
}

/// Result of one query, whether run now or read back from the ledger.
struct Done {
    records: Vec<SourceRecord>,
    truncated: bool,
}

/// Runs query plans through a [`PoliteClient`] into a [`HarvestStore`].
pub struct Harvester<'a> {
    client: PoliteClient<'a>,
    store: HarvestStore,
    workers: usize,
    budget: Mutex<Option<u64>>,
    exhausted: AtomicBool,
    issued: Mutex<BTreeMap<Source, u64>>,
    resumed: AtomicUsize,
    refinements: AtomicUsize,
    unrefined: AtomicUsize,
}

impl<'a> Harvester<'a> {
    pub fn new(fetcher: &'a dyn Fetcher, plan: &HarvestPlan, store: HarvestStore) -> Self {
        Self {
            client: PoliteClient::new(fetcher, plan.concurrency, plan.politeness_delay()),
            store,
            workers: plan.concurrency.max(1),
            budget: Mutex::new(plan.request_budget),
            exhausted: AtomicBool::new(false),
            issued: Mutex::new(BTreeMap::new()),
            resumed: AtomicUsize::new(0),
            refinements: AtomicUsize::new(0),
            unrefined: AtomicUsize::new(0),
        }
    }

    pub fn store(&self) -> &HarvestStore {
        &self.store
    }

    /// Claims up to `wanted` queries from the budget.
    fn admit(&self, wanted: usize) -> usize {
        let mut budget = self.budget.lock().expect("budget lock");
        match budget.as_mut() {
            None => wanted,
            Some(left) => {
                let granted = wanted.min(usize::try_from(*left).unwrap_or(usize::MAX));
                *left -= granted as u64;
                if granted < wanted {
                    self.exhausted.store(true, Ordering::Relaxed);
                }
                granted
            }
        }
    }

    fn execute(&self, query: &Query) -> Result<Done, HarvestError> {
        let path = query.path();
        let body = self.client.fetch(&path)?;
        let outcome = parse_page(query.kind(), &body).map_err(|source| HarvestError::Scrape {
            query: path.clone(),
            source,
        })?;
        *self
            .issued
            .lock()
            .expect("stats lock")
            .entry(query.source())
            .or_default() += 1;
        let entry = LedgerEntry {
            key: query.key(),
            source: query.source(),
            query: path,
            records: outcome.records.len(),
            truncated: outcome.truncated,
            timestamp: Utc::now(),
        };
        self.store
            .commit(entry, outcome.records.clone(), query.chained_from())?;
        Ok(Done {
            records: outcome.records,
            truncated: outcome.truncated,
        })
    }

    /// Runs one batch of independent queries on the worker pool. Queries in
    /// the ledger are answered from it; the rest are admitted against the
    /// budget in batch order. Returns `None` for queries left unadmitted.
    fn run_batch(&self, queries: &[Query]) -> Result<Vec<Option<Done>>, HarvestError> {
        let mut results: Vec<Option<Done>> = Vec::with_capacity(queries.len());
        let mut todo = Vec::new();
        for (i, q) in queries.iter().enumerate() {
            match self.store.completed(&q.key()) {
                Some(e) => {
                    self.resumed.fetch_add(1, Ordering::Relaxed);
                    results.push(Some(Done {
                        records: Vec::new(),
                        truncated: e.truncated,
                    }));
                }
                None => {
                    results.push(None);
                    todo.push(i);
                }
            }
        }
        let admitted = self.admit(todo.len());
        todo.truncate(admitted);
        if todo.is_empty() {
            return Ok(results);
        }
        let next = AtomicUsize::new(0);
        let failed = AtomicBool::new(false);
        let first_error: Mutex<Option<HarvestError>> = Mutex::new(None);
        let done: Mutex<Vec<(usize, Done)>> = Mutex::new(Vec::new());
        thread::scope(|s| {
            for _ in 0..self.workers.min(todo.len()) {
                s.spawn(|| loop {
                    if failed.load(Ordering::Relaxed) {
                        break;
                    }
                    let n = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&i) = todo.get(n) else { break };
                    match self.execute(&queries[i]) {
                        Ok(d) => done.lock().expect("batch lock").push((i, d)),
                        Err(e) => {
                            failed.store(true, Ordering::Relaxed);
                            first_error.lock().expect("batch lock").get_or_insert(e);
                            break;
                        }
                    }
                });
            }
        });
        if let Some(e) = first_error.into_inner().expect("batch lock") {
            return Err(e);
        }
        for (i, d) in done.into_inner().expect("batch lock") {
            results[i] = Some(d);
        }
        Ok(results)
    }

    /// Runs prefix queries level by level, refining every truncated answer.
    fn sweep(&self, roots: Vec<Query>) -> Result<Vec<SourceRecord>, HarvestError> {
        let mut level = roots;
        let mut found = Vec::new();
        while !level.is_empty() {
            let results = self.run_batch(&level)?;
            let mut deeper = Vec::new();
            for (q, r) in level.iter().zip(results) {
                let Some(done) = r else { continue };
                found.extend(done.records);
                if done.truncated {
                    if q.refinable() {
                        self.refinements.fetch_add(1, Ordering::Relaxed);
                        deeper.extend(q.refine());
                    } else {
                        self.unrefined.fetch_add(1, Ordering::Relaxed);
                    }
                }
            }
            level = deeper;
        }
        Ok(found)
    }

    /// Queries every seed and its `span` successors.
    pub fn enumerate_dl(&self, seeds: &[DlNumber], span: u32) -> Result<Vec<LicenceRecord>, HarvestError> {
        let mut ordered: Vec<DlNumber> = Vec::new();
        let mut seen = BTreeSet::new();
        for s in seeds {
            for n in s.range(span) {
                if seen.insert(n) {
                    ordered.push(n);
                }
            }
        }
        let queries: Vec<Query> = ordered.into_iter().map(Query::Dl).collect();
        let results = self.run_batch(&queries)?;
        Ok(results
            .into_iter()
            .flatten()
            .flat_map(|d| d.records)
            .filter_map(|r| match r {
                SourceRecord::Dl(l) => Some(l),
                _ => None,
            })
            .collect())
    }

    /// One prefix query per (constituency, letter), refined on truncation.
    pub fn sweep_voters(&self, letters: &[char], constituencies: &[u8]) -> Result<Vec<crate::VoterRecord>, HarvestError> {
        let roots = constituencies
            .iter()
            .flat_map(|&c| {
                letters.iter().map(move |l| Query::Voter {
                    constituency: c,
                    prefix: normalize_prefix(&l.to_string()),
                })
            })
            .collect();
        Ok(self
            .sweep(roots)?
            .into_iter()
            .filter_map(|r| match r {
                SourceRecord::Voter(v) => Some(v),
                _ => None,
            })
            .collect())
    }

    pub fn sweep_phones(&self, letters: &[char]) -> Result<Vec<crate::PhoneRecord>, HarvestError> {
        let roots = letters
            .iter()
            .map(|l| Query::Phone {
                prefix: normalize_prefix(&l.to_string()),
            })
            .collect();
        Ok(self
            .sweep(roots)?
            .into_iter()
            .filter_map(|r| match r {
                SourceRecord::Phone(p) => Some(p),
                _ => None,
            })
            .collect())
    }

    /// One PAN query per distinct (first name, last name, DOB) among `licences`.
    pub fn chain_pan(&self, licences: &[LicenceRecord]) -> Result<Vec<crate::PanRecord>, HarvestError> {
        let mut sorted: Vec<&LicenceRecord> = licences.iter().collect();
        sorted.sort_by_key(|l| l.dl_number);
        let mut keys = BTreeSet::new();
        let mut queries = Vec::new();
        for l in sorted {
            let n = normalize_name(&l.name);
            let (Some(first), Some(last)) = (n.first(), n.last()) else { continue };
            if keys.insert((first.to_string(), last.to_string(), l.dob)) {
                queries.push(Query::Pan {
                    first: first.to_string(),
                    last: last.to_string(),
                    dob: l.dob,
                    from: l.dl_number,
                });
            }
        }
        let results = self.run_batch(&queries)?;
        Ok(results
            .into_iter()
            .flatten()
            .flat_map(|d| d.records)
            .filter_map(|r| match r {
                SourceRecord::Pan(p) => Some(p),
                _ => None,
            })
            .collect())
    }

    fn dl_then_pan(&self, plan: &HarvestPlan) -> Result<(), HarvestError> {
        self.enumerate_dl(&plan.dl_seeds, plan.dl_span)?;
        if plan.chain_pan {
            self.chain_pan(&self.store.licences())?;
        }
        Ok(())
    }

    /// Runs the whole plan. With an unlimited budget the licence/PAN chain,
    /// the voter sweep and the phone sweep proceed side by side; with a finite
    /// budget they run one after another so the budget is spent in plan order.
    pub fn run(&self, plan: &HarvestPlan) -> Result<(), HarvestError> {
        if plan.request_budget.is_none() {
            let (a, b, c) = thread::scope(|s| {
                let a = s.spawn(|| self.dl_then_pan(plan));
                let b = s.spawn(|| self.sweep_voters(&plan.voter_letters, &plan.constituencies).map(drop));
                let c = s.spawn(|| self.sweep_phones(&plan.phone_letters).map(drop));
                (
                    a.join().expect("licence worker"),
                    b.join().expect("voter worker"),
                    c.join().expect("phone worker"),
                )
            });
            a?;
            b?;
            c?;
        } else {
            self.enumerate_dl(&plan.dl_seeds, plan.dl_span)?;
            self.sweep_voters(&plan.voter_letters, &plan.constituencies)?;
            if plan.chain_pan {
                self.chain_pan(&self.store.licences())?;
            }
            self.sweep_phones(&plan.phone_letters)?;
        }
        Ok(())
    }

    pub fn stats(&self, started: Instant) -> HarvestStats {
        let c = &self.client.counters;
        HarvestStats {
            queries_issued: self.issued.lock().expect("stats lock").clone(),
            records_stored: self.store.stored_counts(),
            queries_resumed: self.resumed.load(Ordering::Relaxed) as u64,
            requests_sent: c.requests_sent.load(Ordering::Relaxed),
            throttle_events: c.throttle_events.load(Ordering::Relaxed),
            captcha_solves: c.captcha_solves.load(Ordering::Relaxed),
            retries: c.retries.load(Ordering::Relaxed),
            max_in_flight: c.max_in_flight.load(Ordering::Relaxed),
            refinements: self.refinements.load(Ordering::Relaxed) as u64,
            unrefined_truncations: self.unrefined.load(Ordering::Relaxed) as u64,
            budget_exhausted: self.exhausted.load(Ordering::Relaxed),
            wall_time_secs: started.elapsed().as_secs_f64(),
        }
    }
}

/// Harvests `plan` into `out`, resuming from any ledger already there.
/// Source files are left sorted and `stats.json` describes this session.
pub fn harvest_all(fetcher: &dyn Fetcher, plan: &HarvestPlan, out: &Path) -> Result<HarvestStats, HarvestError> {
    plan.validate()?;
    let started = Instant::now();
    let harvester = Harvester::new(fetcher, plan, HarvestStore::open(out)?);
    let outcome = harvester.run(plan);
    harvester.store().compact()?;
    let stats = harvester.stats(started);
    let json = serde_json::to_string_pretty(&stats).expect("stats serialize");
    std::fs::write(out.join(STATS_FILE), json).map_err(|source| JsonlError::Io {
        path: out.join(STATS_FILE),
        source,
    })?;
    outcome?;
    if stats.budget_exhausted {
        return Err(HarvestError::BudgetExhausted(Box::new(stats)));
    }
    Ok(stats)
}
