use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::domain::{
    address_match_with, name_distance, name_match, Attribute, DlNumber, LicenceRecord, NormAddress,
    NormName, PanRecord, PhoneRecord, Source, SourceRecord, VoterRecord,
    DEFAULT_ADDRESS_THRESHOLD,
};
use crate::par::{self, ExecMode};
use crate::store::Store;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkRule {
    /// Name match plus address match.
    NameAddress,
    /// PAN fetched with this licence's name and DOB.
    Chained,
    /// Name match plus identical DOB.
    NameDob,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkEvidence {
    pub a: String,
    pub b: String,
    pub rule: LinkRule,
    /// Sum of per-token edit distances.
    pub name_distance: usize,
    /// Jaccard score of the two addresses, when both records carry one.
    pub address_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dossier {
    pub dossier_id: String,
    #[serde(default)]
    pub voters: Vec<VoterRecord>,
    #[serde(default)]
    pub licences: Vec<LicenceRecord>,
    #[serde(default)]
    pub pans: Vec<PanRecord>,
    #[serde(default)]
    pub phones: Vec<PhoneRecord>,
    pub exposed_attributes: BTreeSet<Attribute>,
    #[serde(default)]
    pub link_evidence: Vec<LinkEvidence>,
}

impl Dossier {
    pub fn from_records(records: Vec<SourceRecord>, link_evidence: Vec<LinkEvidence>) -> Self {
        let dossier_id = records
            .iter()
            .map(|r| (r.source().to_string(), r.primary_key()))
            .min()
            .map(|(s, k)| format!("{s}-{k}"))
            .unwrap_or_default();
        let mut d = Dossier {
            dossier_id,
            voters: Vec::new(),
            licences: Vec::new(),
            pans: Vec::new(),
            phones: Vec::new(),
            exposed_attributes: BTreeSet::new(),
            link_evidence,
        };
        for r in records {
            d.exposed_attributes.extend(r.exposed_attributes());
            match r {
                SourceRecord::Voter(v) => d.voters.push(v),
                SourceRecord::Dl(l) => d.licences.push(l),
                SourceRecord::Pan(p) => d.pans.push(p),
                SourceRecord::Phone(p) => d.phones.push(p),
                SourceRecord::Social(_) => {}
            }
        }
        d.voters.sort_by(|a, b| a.voter_id.cmp(&b.voter_id));
        d.licences.sort_by_key(|l| l.dl_number);
        d.pans.sort_by(|a, b| a.pan.cmp(&b.pan));
        d.phones.sort_by(|a, b| a.phone.cmp(&b.phone));
        d
    }

    pub fn records(&self) -> Vec<SourceRecord> {
        let mut out: Vec<SourceRecord> = Vec::new();
        out.extend(self.voters.iter().cloned().map(SourceRecord::Voter));
        out.extend(self.licences.iter().cloned().map(SourceRecord::Dl));
        out.extend(self.pans.iter().cloned().map(SourceRecord::Pan));
        out.extend(self.phones.iter().cloned().map(SourceRecord::Phone));
        out
    }

    pub fn member_keys(&self) -> Vec<String> {
        self.records().iter().map(SourceRecord::key).collect()
    }

    pub fn sources(&self) -> BTreeSet<Source> {
        let mut s = BTreeSet::new();
        if !self.voters.is_empty() {
            s.insert(Source::Voter);
        }
        if !self.licences.is_empty() {
            s.insert(Source::Dl);
        }
        if !self.pans.is_empty() {
            s.insert(Source::Pan);
        }
        if !self.phones.is_empty() {
            s.insert(Source::Phone);
        }
        s
    }

    /// Number of identity databases (voter, DL, PAN) represented.
    pub fn identity_sources(&self) -> usize {
        self.sources().iter().filter(|s| s.is_identity_db()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.voters.is_empty() && self.licences.is_empty() && self.pans.is_empty() && self.phones.is_empty()
    }

    /// Display name taken from the first voter, licence, PAN or phone record.
    pub fn display_name(&self) -> &str {
        self.voters
            .first()
            .map(|v| v.name.as_str())
            .or_else(|| self.licences.first().map(|l| l.name.as_str()))
            .or_else(|| self.pans.first().map(|p| p.name.as_str()))
            .or_else(|| self.phones.first().map(|p| p.name.as_str()))
            .unwrap_or("")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    pub address_threshold: f64,
    pub mode: ExecMode,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            address_threshold: DEFAULT_ADDRESS_THRESHOLD,
            mode: ExecMode::default(),
        }
    }
}

struct Node {
    key: String,
    record: SourceRecord,
    name: NormName,
    address: NormAddress,
    dob: Option<NaiveDate>,
    chained_from: Option<DlNumber>,
}

fn source_bit(s: Source) -> u8 {
    match s {
        Source::Voter => 1,
        Source::Dl => 2,
        Source::Pan => 4,
        Source::Phone => 8,
        Source::Social => 16,
    }
}

struct Partition {
    parent: Vec<usize>,
    mask: Vec<u8>,
}

impl Partition {
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Joins two groups unless that would put two records of one source together.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb || self.mask[ra] & self.mask[rb] != 0 {
            return false;
        }
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[child] = root;
        self.mask[root] |= self.mask[child];
        true
    }
}

fn nodes(store: &Store) -> Vec<Node> {
    let mut out = Vec::new();
    for s in &store.voters {
        let r = SourceRecord::Voter(s.record.clone());
        out.push(Node {
            key: r.key(),
            name: r.norm_name(),
            address: r.norm_address(),
            dob: None,
            chained_from: None,
            record: r,
        });
    }
    for s in &store.licences {
        let dob = Some(s.record.dob);
        let r = SourceRecord::Dl(s.record.clone());
        out.push(Node {
            key: r.key(),
            name: r.norm_name(),
            address: r.norm_address(),
            dob,
            chained_from: None,
            record: r,
        });
    }
    for s in &store.pans {
        let dob = Some(s.record.dob);
        let chained_from = s.provenance.as_ref().and_then(|p| p.chained_from);
        let r = SourceRecord::Pan(s.record.clone());
        out.push(Node {
            key: r.key(),
            name: r.norm_name(),
            address: NormAddress::default(),
            dob,
            chained_from,
            record: r,
        });
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out.dedup_by(|a, b| a.key == b.key);
    out
}

fn total_distance(a: &NormName, b: &NormName) -> usize {
    name_distance(a, b).map_or(usize::MAX, |d| d.iter().sum())
}

/// Voter-licence pairs sharing a first or a last name token.
fn voter_licence_candidates(nodes: &[Node]) -> Vec<(usize, usize)> {
    let mut blocks: BTreeMap<(u8, &str), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        let side = match n.record.source() {
            Source::Voter => 0,
            Source::Dl => 1,
            _ => continue,
        };
        for (pass, token) in [(0u8, n.name.first()), (1u8, n.name.last())] {
            if let Some(t) = token {
                let entry = blocks.entry((pass, t)).or_default();
                if side == 0 {
                    entry.0.push(i);
                } else {
                    entry.1.push(i);
                }
            }
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (voters, licences) in blocks.values() {
        for &v in voters {
            for &d in licences {
                pairs.insert((v, d));
            }
        }
    }
    pairs.into_iter().collect()
}

fn edges(nodes: &[Node], config: &LinkConfig) -> Vec<(usize, usize, LinkEvidence)> {
    let candidates = voter_licence_candidates(nodes);
    let mut out: Vec<(usize, usize, LinkEvidence)> = par::map(config.mode, &candidates, |&(v, d)| {
        let (a, b) = (&nodes[v], &nodes[d]);
        if !name_match(&a.name, &b.name) {
            return None;
        }
        let m = address_match_with(&a.address, &b.address, config.address_threshold);
        m.matched.then(|| {
            (
                v,
                d,
                LinkEvidence {
                    a: a.key.clone(),
                    b: b.key.clone(),
                    rule: LinkRule::NameAddress,
                    name_distance: total_distance(&a.name, &b.name),
                    address_score: Some(m.score),
                },
            )
        })
    })
    .into_iter()
    .flatten()
    .collect();

    let mut licences_by_dob: HashMap<NaiveDate, Vec<usize>> = HashMap::new();
    let mut licence_by_number: HashMap<DlNumber, usize> = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if let SourceRecord::Dl(l) = &n.record {
            licences_by_dob.entry(l.dob).or_default().push(i);
            licence_by_number.insert(l.dl_number, i);
        }
    }
    for (p, pn) in nodes.iter().enumerate() {
        if pn.record.source() != Source::Pan {
            continue;
        }
        let chained = pn.chained_from.and_then(|n| licence_by_number.get(&n)).copied();
        for &d in licences_by_dob.get(&pn.dob.expect("pan dob")).into_iter().flatten() {
            let dn = &nodes[d];
            let rule = if chained == Some(d) {
                LinkRule::Chained
            } else if name_match(&dn.name, &pn.name) {
                LinkRule::NameDob
            } else {
                continue;
            };
            out.push((
                d,
                p,
                LinkEvidence {
                    a: dn.key.clone(),
                    b: pn.key.clone(),
                    rule,
                    name_distance: total_distance(&dn.name, &pn.name),
                    address_score: None,
                },
            ));
        }
    }
    out.sort_by(|x, y| {
        let (ex, ey) = (&x.2, &y.2);
        ex.rule
            .cmp(&ey.rule)
            .then(
                ey.address_score
                    .unwrap_or(0.0)
                    .total_cmp(&ex.address_score.unwrap_or(0.0)),
            )
            .then(ex.name_distance.cmp(&ey.name_distance))
            .then((&ex.a, &ex.b).cmp(&(&ey.a, &ey.b)))
    });
    out
}

/// Groups voter, licence and PAN records of `store` into dossiers.
///
/// A voter and a licence link when names match and addresses match; a PAN
/// links to the licence that seeded its query, or failing that to a licence
/// with a matching name and the same DOB. Links are taken best-first and a
/// dossier never holds two records of one source. Phone records become
/// dossiers of their own. Output is sorted by `dossier_id` and does not
/// depend on the order of records in the store.
pub fn link_cross_db(store: &Store, config: &LinkConfig) -> Vec<Dossier> {
    let nodes = nodes(store);
    let mut part = Partition {
        parent: (0..nodes.len()).collect(),
        mask: nodes.iter().map(|n| source_bit(n.record.source())).collect(),
    };
    let mut evidence: Vec<(usize, LinkEvidence)> = Vec::new();
    for (a, b, ev) in edges(&nodes, config) {
        if part.union(a, b) {
            evidence.push((a, ev));
        }
    }
    let mut groups: BTreeMap<usize, (Vec<SourceRecord>, Vec<LinkEvidence>)> = BTreeMap::new();
    for i in 0..nodes.len() {
        let root = part.find(i);
        groups.entry(root).or_default().0.push(nodes[i].record.clone());
    }
    for (a, ev) in evidence {
        let root = part.find(a);
        groups.entry(root).or_default().1.push(ev);
    }
    let mut phones: Vec<&PhoneRecord> = store.phones.iter().map(|s| &s.record).collect();
    phones.sort_by(|a, b| a.phone.cmp(&b.phone));
    phones.dedup_by(|a, b| a.phone == b.phone);

    let mut out: Vec<Dossier> = groups
        .into_values()
        .map(|(records, mut ev)| {
            ev.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
            Dossier::from_records(records, ev)
        })
        .chain(
            phones
                .into_iter()
                .map(|p| Dossier::from_records(vec![SourceRecord::Phone(p.clone())], Vec::new())),
        )
        .collect();
    out.sort_by(|a, b| a.dossier_id.cmp(&b.dossier_id));
    out
}
