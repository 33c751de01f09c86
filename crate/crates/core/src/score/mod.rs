//! Sensitivity calibration, privacy (M-) scores, DREAD, recall and SUS.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Attribute, SourceRecord};
use crate::link::Dossier;

pub use report::{corpus_report, render_report_text, case_attributes, CaseRow, CorpusReport, REPORT_FILE};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("{what} {value} out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("attribute {0} has no sensitivity level")]
    UnknownAttribute(Attribute),
    #[error("recall needs at least one searched person")]
    EmptyDenominator,
    #[error("malformed SUS response: {0}")]
    MalformedResponse(String),
    #[error("bad sensitivity file {path}: {reason}")]
    SensitivityFile { path: String, reason: String },
}

/// Survey share of respondents unwilling to disclose each attribute, in percent.
pub const SURVEY_PERCENTAGES: [(Attribute, f64); 9] = [
    (Attribute::VoterId, 56.4),
    (Attribute::DlNumber, 58.0),
    (Attribute::PanNumber, 67.7),
    (Attribute::FullName, 14.5),
    (Attribute::Address, 82.2),
    (Attribute::Age, 29.0),
    (Attribute::Dob, 50.0),
    (Attribute::RelativeName, 38.7),
    (Attribute::Gender, 14.5),
];

pub const DEFAULT_LEVEL: u8 = 3;

/// Lower bounds of levels 2 through 5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelThresholds(pub [f64; 4]);

impl Default for LevelThresholds {
    fn default() -> Self {
        Self([20.0, 35.0, 55.0, 65.0])
    }
}

pub fn level_from_percentage(p: f64) -> Result<u8, ScoreError> {
    level_with(p, &LevelThresholds::default())
}

pub fn level_with(p: f64, thresholds: &LevelThresholds) -> Result<u8, ScoreError> {
    if !(0.0..=100.0).contains(&p) {
        return Err(ScoreError::OutOfRange {
            what: "percentage",
            value: p,
        });
    }
    Ok(1 + thresholds.0.iter().filter(|&&t| p >= t).count() as u8)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensitivityTable {
    pub levels: BTreeMap<Attribute, u8>,
    pub context: String,
}

impl Default for SensitivityTable {
    /// The survey-calibrated table.
    fn default() -> Self {
        build_sensitivity_table(&SURVEY_PERCENTAGES).expect("survey percentages are valid")
    }
}

impl SensitivityTable {
    pub fn level(&self, a: Attribute) -> Option<u8> {
        self.levels.get(&a).copied()
    }

    /// Every attribute at the same level.
    pub fn uniform(level: u8) -> Self {
        Self {
            levels: Attribute::ALL.iter().map(|&a| (a, level)).collect(),
            context: "public".into(),
        }
    }

    /// Reads `attribute,percentage` or `attribute,level` rows. The second
    /// header cell decides which; a headerless file is read as percentages.
    pub fn from_csv(path: &Path) -> Result<Self, ScoreError> {
        let bad = |reason: String| ScoreError::SensitivityFile {
            path: path.display().to_string(),
            reason,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_path(path)
            .map_err(|e| bad(e.to_string()))?;
        let mut as_levels = false;
        let mut rows: Vec<(Attribute, f64)> = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let (Some(name), Some(value)) = (rec.get(0), rec.get(1)) else {
                return Err(bad(format!("row {} needs two columns", i + 1)));
            };
            if i == 0 && value.parse::<f64>().is_err() {
                as_levels = value.eq_ignore_ascii_case("level");
                continue;
            }
            let a = Attribute::parse(name).ok_or_else(|| bad(format!("unknown attribute {name:?}")))?;
            let v: f64 = value
                .trim_end_matches('%')
                .parse()
                .map_err(|_| bad(format!("bad number {value:?}")))?;
            rows.push((a, v));
        }
        if as_levels {
            let mut t = Self::uniform(DEFAULT_LEVEL);
            for (a, v) in rows {
                if !(1.0..=5.0).contains(&v) || v.fract() != 0.0 {
                    return Err(bad(format!("level {v} for {a} is not 1..5")));
                }
                t.levels.insert(a, v as u8);
            }
            Ok(t)
        } else {
            build_sensitivity_table(&rows)
        }
    }
}

/// Levels from survey percentages; attributes without data get [`DEFAULT_LEVEL`].
pub fn build_sensitivity_table(rows: &[(Attribute, f64)]) -> Result<SensitivityTable, ScoreError> {
    let mut t = SensitivityTable::uniform(DEFAULT_LEVEL);
    for &(a, p) in rows {
        t.levels.insert(a, level_from_percentage(p)?);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMode {
    /// The dossier is one logical record carrying the union of attributes.
    #[default]
    Union,
    /// Maximum over the member records' own scores.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreParams {
    /// Record-count exponent is `1/x`; infinity removes the count.
    pub x: f64,
    /// Distinguishability factor applied to every record.
    pub d: f64,
    pub cap_rrs_at_one: bool,
    pub mode: ScoreMode,
}

impl Default for ScoreParams {
    fn default() -> Self {
        Self {
            x: f64::INFINITY,
            d: 1.0,
            cap_rrs_at_one: false,
            mode: ScoreMode::Union,
        }
    }
}

impl ScoreParams {
    pub fn validate(&self) -> Result<(), ScoreError> {
        if self.x.is_nan() || self.x < 1.0 {
            return Err(ScoreError::OutOfRange { what: "x", value: self.x });
        }
        if !(self.d > 0.0) || !self.d.is_finite() {
            return Err(ScoreError::OutOfRange { what: "D", value: self.d });
        }
        Ok(())
    }
}

/// Sum of sensitivity levels over `attrs`, or `min(1, sum)` when capped.
pub fn raw_record_score(
    attrs: &BTreeSet<Attribute>,
    table: &SensitivityTable,
    params: &ScoreParams,
) -> Result<u32, ScoreError> {
    let mut sum = 0u32;
    for &a in attrs {
        sum += u32::from(table.level(a).ok_or(ScoreError::UnknownAttribute(a))?);
    }
    Ok(if params.cap_rrs_at_one { sum.min(1) } else { sum })
}

/// `r^(1/x) * max_i(RRS_i / D_i)` over per-record raw scores and factors.
/// Zero records score zero.
pub fn mscore(rrs: &[f64], d: &[f64], x: f64) -> f64 {
    assert_eq!(rrs.len(), d.len(), "one distinguishability factor per record");
    if rrs.is_empty() {
        return 0.0;
    }
    let r = rrs.len() as f64;
    let best = rrs
        .iter()
        .zip(d)
        .map(|(s, d)| s / d)
        .fold(f64::NEG_INFINITY, f64::max);
    r.powf(1.0 / x) * best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyScore {
    pub value: f64,
    /// Attributes that contributed, with their levels.
    pub attributes: Vec<(Attribute, u8)>,
}

pub fn privacy_score(dossier: &Dossier, table: &SensitivityTable, params: &ScoreParams) -> Result<PrivacyScore, ScoreError> {
    let records = dossier.records();
    score_records(&records, table, params)
}

/// Scores any set of records as one person.
pub fn score_records(records: &[SourceRecord], table: &SensitivityTable, params: &ScoreParams) -> Result<PrivacyScore, ScoreError> {
    params.validate()?;
    let union: BTreeSet<Attribute> = records.iter().flat_map(|r| r.exposed_attributes()).collect();
    let attributes = union
        .iter()
        .map(|&a| table.level(a).map(|l| (a, l)).ok_or(ScoreError::UnknownAttribute(a)))
        .collect::<Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Ok(PrivacyScore {
            value: 0.0,
            attributes,
        });
    }
    let value = match params.mode {
        ScoreMode::Union => {
            let rrs = f64::from(raw_record_score(&union, table, params)?);
            mscore(&[rrs], &[params.d], 1.0) * (records.len() as f64).powf(1.0 / params.x)
        }
        ScoreMode::Max => {
            let rrs = records
                .iter()
                .map(|r| raw_record_score(&r.exposed_attributes(), table, params).map(f64::from))
                .collect::<Result<Vec<_>, _>>()?;
            mscore(&rrs, &vec![params.d; rrs.len()], params.x)
        }
    };
    Ok(PrivacyScore { value, attributes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DreadBand {
    Low,
    Medium,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DreadScore {
    pub damage: u8,
    pub reproducibility: u8,
    pub exploitability: u8,
    pub affected_users: u8,
    pub discoverability: u8,
    pub total: u8,
    pub band: DreadBand,
}

pub fn dread_score(factors: [u8; 5]) -> Result<DreadScore, ScoreError> {
    if let Some(&bad) = factors.iter().find(|f| !(1..=3).contains(*f)) {
        return Err(ScoreError::OutOfRange {
            what: "DREAD factor",
            value: f64::from(bad),
        });
    }
    let total: u8 = factors.iter().sum();
    let band = match total {
        ..=7 => DreadBand::Low,
        8..=11 => DreadBand::Medium,
        _ => DreadBand::High,
    };
    let [damage, reproducibility, exploitability, affected_users, discoverability] = factors;
    Ok(DreadScore {
        damage,
        reproducibility,
        exploitability,
        affected_users,
        discoverability,
        total,
        band,
    })
}

/// Percentage identified, rounded to one decimal.
pub fn recall(identified: u64, searched: u64) -> Result<f64, ScoreError> {
    if searched == 0 {
        return Err(ScoreError::EmptyDenominator);
    }
    if identified > searched {
        return Err(ScoreError::OutOfRange {
            what: "identified count",
            value: identified as f64,
        });
    }
    let pct = 100.0 * identified as f64 / searched as f64;
    Ok((pct * 10.0).round() / 10.0)
}

/// Ten answers on a 1..5 scale, item 1 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusResponse(pub [u8; 10]);

impl SusResponse {
    pub fn new(items: &[u8]) -> Result<Self, ScoreError> {
        let arr: [u8; 10] = items
            .try_into()
            .map_err(|_| ScoreError::MalformedResponse(format!("{} items, expected 10", items.len())))?;
        if let Some(bad) = arr.iter().find(|v| !(1..=5).contains(*v)) {
            return Err(ScoreError::MalformedResponse(format!("item value {bad} outside 1..5")));
        }
        Ok(Self(arr))
    }

    pub fn score(&self) -> f64 {
        let sum: u32 = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { u32::from(v) - 1 } else { 5 - u32::from(v) })
            .sum();
        f64::from(sum) * 2.5
    }
}

/// Mean SUS over responses.
pub fn sus_score(responses: &[SusResponse]) -> Result<f64, ScoreError> {
    if responses.is_empty() {
        return Err(ScoreError::MalformedResponse("no responses".into()));
    }
    Ok(responses.iter().map(SusResponse::score).sum::<f64>() / responses.len() as f64)
}

/// One response per CSV row; rows that are not ten integers are rejected,
/// except a leading header row.
pub fn read_sus_csv(path: &Path) -> Result<Vec<SusResponse>, ScoreError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| ScoreError::MalformedResponse(e.to_string()))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| ScoreError::MalformedResponse(e.to_string()))?;
        let parsed: Result<Vec<u8>, _> = rec.iter().map(str::parse::<u8>).collect();
        match parsed {
            Ok(items) => out.push(SusResponse::new(&items).map_err(|e| match e {
                ScoreError::MalformedResponse(m) => ScoreError::MalformedResponse(format!("row {}: {m}", i + 1)),
                other => other,
            })?),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(ScoreError::MalformedResponse(format!("row {}: not integers", i + 1))),
        }
    }
    Ok(out)
}
