use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::domain::{DlNumber, LicenceRecord, Source, SourceRecord};
use crate::jsonl::{self, JsonlError};
use crate::store::{Provenance, Store, Stored};

pub const LEDGER_FILE: &str = "ledger.jsonl";
pub const STATS_FILE: &str = "stats.json";

/// One completed query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub key: String,
    pub source: Source,
    pub query: String,
    pub records: usize,
    pub truncated: bool,
    pub timestamp: DateTime<Utc>,
}

struct Inner {
    seen: HashSet<String>,
    ledger: HashMap<String, LedgerEntry>,
    licences: BTreeMap<DlNumber, LicenceRecord>,
    stored: BTreeMap<Source, u64>,
}

/// Append-only harvest directory: per-source record files plus the query
/// ledger. A record line always lands before the ledger line of the query
/// that produced it, so a crash can only cause a query to be repeated.
pub struct HarvestStore {
    dir: PathBuf,
    inner: Mutex<Inner>,
}

impl HarvestStore {
    pub fn open(dir: &Path) -> Result<Self, JsonlError> {
        fs::create_dir_all(dir).map_err(|source| JsonlError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let existing = Store::load(dir)?;
        let seen = existing.records().map(|r| r.key()).collect();
        let licences = existing
            .licences
            .iter()
            .map(|s| (s.record.dl_number, s.record.clone()))
            .collect();
        let entries: Vec<LedgerEntry> = jsonl::read(&dir.join(LEDGER_FILE))?;
        let ledger = entries.into_iter().map(|e| (e.key.clone(), e)).collect();
        Ok(Self {
            dir: dir.to_path_buf(),
            inner: Mutex::new(Inner {
                seen,
                ledger,
                licences,
                stored: BTreeMap::new(),
            }),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn completed(&self, key: &str) -> Option<LedgerEntry> {
        self.inner.lock().expect("store lock").ledger.get(key).cloned()
    }

    pub fn ledger_len(&self) -> usize {
        self.inner.lock().expect("store lock").ledger.len()
    }

    pub fn licences(&self) -> Vec<LicenceRecord> {
        self.inner
            .lock()
            .expect("store lock")
            .licences
            .values()
            .cloned()
            .collect()
    }

    /// Records stored by this session, per source.
    pub fn stored_counts(&self) -> BTreeMap<Source, u64> {
        self.inner.lock().expect("store lock").stored.clone()
    }

    /// Persists the new records of one query, then its ledger line.
    pub fn commit(
        &self,
        entry: LedgerEntry,
        records: Vec<SourceRecord>,
        chained_from: Option<DlNumber>,
    ) -> Result<(), JsonlError> {
        let mut inner = self.inner.lock().expect("store lock");
        let provenance = Provenance {
            source: entry.source,
            query: entry.query.clone(),
            timestamp: entry.timestamp,
            chained_from,
        };
        for record in records {
            if !inner.seen.insert(record.key()) {
                continue;
            }
            let path = self.dir.join(record.source().file_name());
            *inner.stored.entry(record.source()).or_default() += 1;
            let provenance = Some(provenance.clone());
            match record {
                SourceRecord::Voter(r) => jsonl::append(&path, [&Stored { record: r, provenance }])?,
                SourceRecord::Dl(r) => {
                    inner.licences.insert(r.dl_number, r.clone());
                    jsonl::append(&path, [&Stored { record: r, provenance }])?
                }
                SourceRecord::Pan(r) => jsonl::append(&path, [&Stored { record: r, provenance }])?,
                SourceRecord::Phone(r) => jsonl::append(&path, [&Stored { record: r, provenance }])?,
                SourceRecord::Social(r) => jsonl::append(&path, [&Stored { record: r, provenance }])?,
            }
        }
        jsonl::append(&self.dir.join(LEDGER_FILE), [&entry])?;
        inner.ledger.insert(entry.key.clone(), entry);
        Ok(())
    }

    /// Rewrites every source file sorted by primary key.
    pub fn compact(&self) -> Result<Store, JsonlError> {
        let _guard = self.inner.lock().expect("store lock");
        let mut store = Store::load(&self.dir)?;
        store.sort();
        store.save(&self.dir)?;
        Ok(store)
    }
}
