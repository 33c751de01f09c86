use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domain::{Attribute, Source};
use crate::link::{tree_coverage, Dossier, Linked};
use crate::par::{self, ExecMode};
use crate::store::Store;
use crate::synth::PresenceCase;

use super::{privacy_score, raw_record_score, ScoreError, ScoreParams, SensitivityTable};

pub const REPORT_FILE: &str = "report.json";

/// Published per-case figures, which differ from the table sums for cases 2 to 5.
const REFERENCE_SCORES: [(PresenceCase, u32); 5] = [
    (PresenceCase::VoterOnly, 16),
    (PresenceCase::DlOnly, 17),
    (PresenceCase::PanDl, 25),
    (PresenceCase::VoterDl, 24),
    (PresenceCase::VoterDlPan, 29),
];

const VOTER_ATTRS: [Attribute; 6] = [
    Attribute::VoterId,
    Attribute::FullName,
    Attribute::RelativeName,
    Attribute::Age,
    Attribute::Gender,
    Attribute::Address,
];
const DL_ATTRS: [Attribute; 5] = [
    Attribute::DlNumber,
    Attribute::FullName,
    Attribute::RelativeName,
    Attribute::Dob,
    Attribute::Address,
];
const PAN_ATTRS: [Attribute; 3] = [Attribute::PanNumber, Attribute::FullName, Attribute::Dob];

/// Attributes a person in `case` exposes across the databases they appear in.
pub fn case_attributes(case: PresenceCase) -> BTreeSet<Attribute> {
    let mut out = BTreeSet::new();
    if case.has_voter() {
        out.extend(VOTER_ATTRS);
    }
    if case.has_dl() {
        out.extend(DL_ATTRS);
    }
    if case.has_pan() {
        out.extend(PAN_ATTRS);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case: PresenceCase,
    pub number: u8,
    pub label: String,
    pub dossiers: usize,
    /// Share of classified dossiers, in percent.
    pub percentage: f64,
    /// Score of the case's full attribute set under the active table.
    pub score: f64,
    /// Highest score among this case's dossiers, 0 when there are none.
    pub observed_max: f64,
    pub reference_score: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub source_counts: BTreeMap<Source, usize>,
    pub dossiers: usize,
    pub cases: Vec<CaseRow>,
    /// Dossiers whose identity databases fit none of the five cases
    /// (phone-only, PAN-only, voter plus PAN).
    pub unclassified: usize,
    pub cross_db_dossiers: usize,
    pub voters: usize,
    pub tree_coverage: usize,
    pub combined_social_profiles: usize,
    pub max_score: f64,
    pub max_score_count: usize,
    pub max_score_dossiers: Vec<String>,
    pub sensitivity: BTreeMap<Attribute, u8>,
    pub notes: Vec<String>,
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn case_of(d: &Dossier) -> Option<PresenceCase> {
    PresenceCase::from_sources(!d.voters.is_empty(), !d.licences.is_empty(), !d.pans.is_empty())
}

pub fn corpus_report(
    store: &Store,
    linked: &Linked,
    table: &SensitivityTable,
    params: &ScoreParams,
    mode: ExecMode,
) -> Result<CorpusReport, ScoreError> {
    params.validate()?;
    let scores = par::map(mode, &linked.dossiers, |d| privacy_score(d, table, params).map(|s| s.value))
        .into_iter()
        .collect::<Result<Vec<f64>, _>>()?;

    let mut per_case: BTreeMap<PresenceCase, (usize, f64)> = BTreeMap::new();
    let mut unclassified = 0;
    for (d, &s) in linked.dossiers.iter().zip(&scores) {
        match case_of(d) {
            Some(c) => {
                let e = per_case.entry(c).or_insert((0, 0.0));
                e.0 += 1;
                e.1 = e.1.max(s);
            }
            None => unclassified += 1,
        }
    }
    let classified: usize = per_case.values().map(|e| e.0).sum();

    let mut cases = Vec::new();
    let mut notes = Vec::new();
    for (case, reference) in REFERENCE_SCORES {
        let (count, observed) = per_case.get(&case).copied().unwrap_or((0, 0.0));
        let score = f64::from(raw_record_score(&case_attributes(case), table, params)?);
        if score != f64::from(reference) {
            notes.push(format!(
                "case {}: table levels sum to {score}, published figure is {reference}",
                case.number()
            ));
        }
        cases.push(CaseRow {
            case,
            number: case.number(),
            label: case.label().to_string(),
            dossiers: count,
            percentage: if classified == 0 { 0.0 } else { round3(100.0 * count as f64 / classified as f64) },
            score,
            observed_max: observed,
            reference_score: reference,
        });
    }

    let max_score = scores.iter().copied().fold(0.0, f64::max);
    let max_score_dossiers: Vec<String> = if linked.dossiers.is_empty() {
        Vec::new()
    } else {
        linked
            .dossiers
            .iter()
            .zip(&scores)
            .filter(|(_, &s)| s == max_score)
            .map(|(d, _)| d.dossier_id.clone())
            .collect()
    };

    Ok(CorpusReport {
        source_counts: store.counts(),
        dossiers: linked.dossiers.len(),
        cases,
        unclassified,
        cross_db_dossiers: linked.dossiers.iter().filter(|d| d.identity_sources() >= 2).count(),
        voters: store.voters.len(),
        tree_coverage: tree_coverage(&linked.trees),
        combined_social_profiles: linked.social.iter().filter(|c| c.members.len() > 1).count(),
        max_score,
        max_score_count: max_score_dossiers.len(),
        max_score_dossiers,
        sensitivity: table.levels.clone(),
        notes,
    })
}

pub fn render_report_text(r: &CorpusReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Records per source");
    for (src, n) in &r.source_counts {
        let _ = writeln!(s, "  {:<8} {n:>9}", src.to_string());
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<4} {:<34} {:>9} {:>8} {:>6} {:>6} {:>5}",
        "case", "databases", "dossiers", "share%", "score", "seen", "ref"
    );
    for c in &r.cases {
        let _ = writeln!(
            s,
            "{:<4} {:<34} {:>9} {:>8.2} {:>6} {:>6} {:>5}",
            c.number, c.label, c.dossiers, c.percentage, c.score, c.observed_max, c.reference_score
        );
    }
    let _ = writeln!(s, "     {:<34} {:>9}", "other / unclassified", r.unclassified);
    let _ = writeln!(s);
    let _ = writeln!(s, "dossiers            {}", r.dossiers);
    let _ = writeln!(s, "cross-database      {}", r.cross_db_dossiers);
    let _ = writeln!(s, "family trees        {} of {} voters", r.tree_coverage, r.voters);
    let _ = writeln!(s, "combined social     {}", r.combined_social_profiles);
    let _ = writeln!(s, "maximum score       {} ({} dossiers)", r.max_score, r.max_score_count);
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}
