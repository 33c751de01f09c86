//! Read-only search index over a linked store.
//!
//! Everything is computed once in [`SearchIndex::build`]; queries never touch
//! the disk and never mutate the index, so one index can be shared across any
//! number of request handlers.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    name_match, normalize_address, normalize_name, NormAddress, NormName, Source, SourceRecord,
};
use crate::link::{Dossier, FamilyTree, LinkConfig, Linked};
use crate::par::{self, ExecMode};
use crate::score::{
    corpus_report, privacy_score, CorpusReport, PrivacyScore, ScoreError, ScoreParams,
    SensitivityTable,
};
use crate::store::{Store, StoreError};

pub const PAGE_SIZE: usize = 50;
pub const CROSS_DB_GROUP: &str = "cross_db";

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("search needs a name")]
    EmptyQuery,
    #[error("no dossier {0}")]
    NotFound(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Score(#[from] ScoreError),
}

/// How well a record name answers the query; lower is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchQuality {
    Exact,
    Fuzzy,
    Prefix,
}

fn match_quality(query: &NormName, name: &NormName) -> Option<MatchQuality> {
    let (q, n) = (query.joined(), name.joined());
    if q == n {
        Some(MatchQuality::Exact)
    } else if name_match(query, name) {
        Some(MatchQuality::Fuzzy)
    } else if n.starts_with(&q) {
        Some(MatchQuality::Prefix)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchItem {
    pub key: String,
    pub group: String,
    pub name: String,
    pub address: Option<String>,
    pub match_quality: MatchQuality,
    /// Absent for social profiles, which never join a dossier.
    pub dossier_id: Option<String>,
    pub privacy_score: Option<f64>,
    pub record: SourceRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DossierHit {
    pub dossier_id: String,
    pub name: String,
    pub sources: Vec<Source>,
    pub match_quality: MatchQuality,
    pub privacy_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group<T> {
    pub total: usize,
    pub items: Vec<T>,
}

impl<T> Group<T> {
    fn page(mut all: Vec<T>, page: usize) -> Self {
        let total = all.len();
        let start = (page - 1).saturating_mul(PAGE_SIZE).min(total);
        let end = (start + PAGE_SIZE).min(total);
        all.truncate(end);
        let items = all.split_off(start);
        Self { total, items }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub query: String,
    pub location: Option<String>,
    pub page: usize,
    pub page_size: usize,
    /// One entry per source group, always present even when empty.
    pub groups: BTreeMap<String, Group<SearchItem>>,
    pub cross_db: Group<DossierHit>,
}

impl SearchResult {
    pub fn is_empty(&self) -> bool {
        self.cross_db.total == 0 && self.groups.values().all(|g| g.total == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relative {
    pub role: String,
    pub voter_id: String,
    pub name: String,
    pub dossier_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DossierView {
    pub dossier: Dossier,
    pub tree: Option<FamilyTree>,
    pub relatives: Vec<Relative>,
    pub score: PrivacyScore,
}

struct Entry {
    group: String,
    name: NormName,
    address: NormAddress,
    dossier: Option<usize>,
    record: SourceRecord,
}

fn group_of(r: &SourceRecord) -> String {
    match r {
        SourceRecord::Social(p) => p.network.to_string(),
        other => other.source().to_string(),
    }
}

fn all_groups() -> Vec<String> {
    let mut g: Vec<String> = [Source::Voter, Source::Dl, Source::Pan, Source::Phone]
        .iter()
        .map(Source::to_string)
        .collect();
    g.extend(crate::domain::SocialNetwork::ALL.iter().map(|n| n.to_string()));
    g
}

pub struct SearchIndex {
    entries: Vec<Entry>,
    dossiers: Vec<Dossier>,
    scores: Vec<PrivacyScore>,
    by_id: HashMap<String, usize>,
    trees: HashMap<String, FamilyTree>,
    voter_names: HashMap<String, String>,
    report: CorpusReport,
}

impl SearchIndex {
    pub fn build(
        store: &Store,
        linked: Linked,
        table: &SensitivityTable,
        params: &ScoreParams,
        mode: ExecMode,
    ) -> Result<Self, ServiceError> {
        let report = corpus_report(store, &linked, table, params, mode)?;
        let scores = par::map(mode, &linked.dossiers, |d| privacy_score(d, table, params))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;

        let mut by_id = HashMap::new();
        let mut dossier_of_key = HashMap::new();
        for (i, d) in linked.dossiers.iter().enumerate() {
            by_id.insert(d.dossier_id.clone(), i);
            for k in d.member_keys() {
                dossier_of_key.insert(k, i);
            }
        }

        let mut entries: Vec<Entry> = store
            .records()
            .map(|r| {
                let dossier = dossier_of_key.get(&r.key()).copied();
                let mut address = r.norm_address();
                if address.is_empty() {
                    if let Some(i) = dossier {
                        address = dossier_address(&linked.dossiers[i]);
                    }
                }
                Entry {
                    group: group_of(&r),
                    name: r.norm_name(),
                    address,
                    dossier,
                    record: r,
                }
            })
            .collect();
        entries.sort_by_cached_key(|e| e.record.key());

        let voter_names = store
            .voters
            .iter()
            .map(|v| (v.record.voter_id.clone(), v.record.name.clone()))
            .collect();
        let trees = linked.trees.into_iter().map(|t| (t.ego.clone(), t)).collect();
        Ok(Self {
            entries,
            dossiers: linked.dossiers,
            scores,
            by_id,
            trees,
            voter_names,
            report,
        })
    }

    /// Loads a store directory and its linker output, linking on the fly
    /// when no linker output exists yet.
    pub fn open(dir: &Path, table: &SensitivityTable, params: &ScoreParams, mode: ExecMode) -> Result<Self, ServiceError> {
        let store = Store::load(dir)?;
        let linked = if Linked::is_present(dir) {
            Linked::read(dir)?
        } else {
            Linked::build(&store, &LinkConfig { mode, ..LinkConfig::default() })
        };
        Self::build(&store, linked, table, params, mode)
    }

    /// `page` is 1-based; 0 is read as 1.
    pub fn search(&self, name: &str, location: Option<&str>, page: usize) -> Result<SearchResult, ServiceError> {
        let query = normalize_name(name);
        if query.is_empty() {
            return Err(ServiceError::EmptyQuery);
        }
        let location = location.map(str::trim).filter(|l| !l.is_empty());
        let loc = location.map(normalize_address).filter(|l| !l.is_empty());
        let page = page.max(1);

        let mut groups: BTreeMap<String, Vec<(MatchQuality, &Entry)>> =
            all_groups().into_iter().map(|g| (g, Vec::new())).collect();
        let mut hit_dossiers: BTreeMap<usize, MatchQuality> = BTreeMap::new();
        for e in &self.entries {
            let Some(q) = match_quality(&query, &e.name) else { continue };
            if let Some(loc) = &loc {
                if !e.address.contains_all(loc) {
                    continue;
                }
            }
            groups.entry(e.group.clone()).or_default().push((q, e));
            if let Some(i) = e.dossier {
                let best = hit_dossiers.entry(i).or_insert(q);
                *best = (*best).min(q);
            }
        }

        let groups = groups
            .into_iter()
            .map(|(g, mut hits)| {
                hits.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.record.primary_key().cmp(&b.1.record.primary_key())));
                let items = hits.into_iter().map(|(q, e)| self.item(q, e)).collect();
                (g, Group::page(items, page))
            })
            .collect();

        let mut cross: Vec<DossierHit> = hit_dossiers
            .into_iter()
            .filter(|&(i, _)| self.dossiers[i].identity_sources() >= 2)
            .map(|(i, q)| {
                let d = &self.dossiers[i];
                DossierHit {
                    dossier_id: d.dossier_id.clone(),
                    name: d.display_name().to_string(),
                    sources: d.sources().into_iter().collect(),
                    match_quality: q,
                    privacy_score: self.scores[i].value,
                }
            })
            .collect();
        cross.sort_by(|a, b| a.match_quality.cmp(&b.match_quality).then_with(|| a.dossier_id.cmp(&b.dossier_id)));

        Ok(SearchResult {
            query: query.joined(),
            location: location.map(str::to_string),
            page,
            page_size: PAGE_SIZE,
            groups,
            cross_db: Group::page(cross, page),
        })
    }

    fn item(&self, q: MatchQuality, e: &Entry) -> SearchItem {
        SearchItem {
            key: e.record.key(),
            group: e.group.clone(),
            name: e.record.name().to_string(),
            address: e.record.address().map(str::to_string),
            match_quality: q,
            dossier_id: e.dossier.map(|i| self.dossiers[i].dossier_id.clone()),
            privacy_score: e.dossier.map(|i| self.scores[i].value),
            record: e.record.clone(),
        }
    }

    pub fn get_dossier(&self, id: &str) -> Result<DossierView, ServiceError> {
        let &i = self.by_id.get(id).ok_or_else(|| ServiceError::NotFound(id.to_string()))?;
        let dossier = self.dossiers[i].clone();
        let tree = dossier.voters.first().and_then(|v| self.trees.get(&v.voter_id)).cloned();
        let relatives = tree.as_ref().map(|t| self.relatives(t)).unwrap_or_default();
        Ok(DossierView {
            dossier,
            tree,
            relatives,
            score: self.scores[i].clone(),
        })
    }

    fn relatives(&self, t: &FamilyTree) -> Vec<Relative> {
        let roles = t
            .father
            .iter()
            .map(|v| ("father", v))
            .chain(t.mother.iter().map(|v| ("mother", v)))
            .chain(t.spouse.iter().map(|v| ("spouse", v)))
            .chain(t.siblings.iter().map(|v| ("sibling", v)));
        roles
            .map(|(role, v)| Relative {
                role: role.to_string(),
                voter_id: v.clone(),
                name: self.voter_names.get(v).cloned().unwrap_or_default(),
                dossier_id: self.dossier_of_voter(v),
            })
            .collect()
    }

    pub fn dossier_of_voter(&self, voter_id: &str) -> Option<String> {
        let key = format!("{}:{voter_id}", Source::Voter);
        self.entries
            .binary_search_by(|e| e.record.key().cmp(&key))
            .ok()
            .and_then(|j| self.entries[j].dossier)
            .map(|i| self.dossiers[i].dossier_id.clone())
    }

    pub fn stats(&self) -> &CorpusReport {
        &self.report
    }

    pub fn dossier_ids(&self) -> impl Iterator<Item = &str> {
        self.dossiers.iter().map(|d| d.dossier_id.as_str())
    }
}

fn dossier_address(d: &Dossier) -> NormAddress {
    let joined: Vec<String> = d
        .records()
        .iter()
        .filter_map(|r| r.address().map(str::to_string))
        .collect();
    normalize_address(&joined.join(" "))
}
