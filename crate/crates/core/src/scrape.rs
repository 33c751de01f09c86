//! Turns portal HTML back into typed records.
//!
//! Columns are located by their header label, never by position, so a page
//! whose columns were reordered still parses. Label comparison ignores case
//! and whitespace runs.

use std::collections::HashMap;

use chrono::NaiveDate;
use scraper::{ElementRef, Html, Selector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    DlNumber, Gender, LicenceRecord, PanNumber, PanRecord, PhoneRecord, Relation, SourceRecord,
    ValidityPeriod, VoterRecord,
};
use crate::portal::{DL_LABELS, NO_RECORDS, PAN_LABELS, PHONE_LABELS, TRUNCATION_MARKER, VOTER_LABELS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScrapeError {
    #[error("malformed page: no recognizable {0}")]
    MalformedPage(String),
    #[error("schema drift: expected column {0:?}")]
    SchemaDrift(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PageKind {
    Dl,
    Voter,
    Pan,
    Phone,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseOutcome {
    pub records: Vec<SourceRecord>,
    pub page_kind: PageKind,
    pub truncated: bool,
}

struct Grid {
    columns: HashMap<String, usize>,
    rows: Vec<Vec<String>>,
}

fn squash(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn label_key(text: &str) -> String {
    squash(text).to_lowercase()
}

fn cell_text(cell: ElementRef<'_>) -> String {
    squash(&cell.text().collect::<String>())
}

fn selector(css: &str) -> Selector {
    Selector::parse(css).expect("static selector")
}

/// Header map and data rows of the first table, or `None` for a no-results page.
fn grid(html: &str) -> Result<Option<Grid>, ScrapeError> {
    let doc = Html::parse_document(html);
    let Some(table) = doc.select(&selector("table")).next() else {
        let body_text = squash(&doc.root_element().text().collect::<String>());
        if body_text.contains(NO_RECORDS) {
            return Ok(None);
        }
        return Err(ScrapeError::MalformedPage("table".into()));
    };
    let tr = selector("tr");
    let th = selector("th");
    let td = selector("td");
    let mut rows = table.select(&tr);
    let header = rows
        .next()
        .ok_or_else(|| ScrapeError::MalformedPage("header row".into()))?;
    let mut labels: Vec<String> = header.select(&th).map(cell_text).collect();
    if labels.is_empty() {
        labels = header.select(&td).map(cell_text).collect();
    }
    if labels.is_empty() {
        return Err(ScrapeError::MalformedPage("header row".into()));
    }
    let columns = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (label_key(l), i))
        .collect();
    let rows = rows
        .map(|r| r.select(&td).map(cell_text).collect::<Vec<_>>())
        .filter(|cells| !cells.is_empty())
        .collect();
    Ok(Some(Grid { columns, rows }))
}

fn truncated(html: &str) -> bool {
    html.contains(TRUNCATION_MARKER)
}

struct Row<'a> {
    cells: &'a [String],
    index: &'a HashMap<&'static str, usize>,
}

impl Row<'_> {
    fn get(&self, label: &'static str) -> Result<&str, ScrapeError> {
        self.index
            .get(label)
            .and_then(|&i| self.cells.get(i))
            .map(String::as_str)
            .ok_or_else(|| ScrapeError::SchemaDrift(label.into()))
    }

    fn parse<T: std::str::FromStr>(&self, label: &'static str) -> Result<T, ScrapeError> {
        self.get(label)?
            .parse()
            .map_err(|_| ScrapeError::SchemaDrift(label.into()))
    }

    fn date(&self, label: &'static str) -> Result<NaiveDate, ScrapeError> {
        parse_date(self.get(label)?).ok_or_else(|| ScrapeError::SchemaDrift(label.into()))
    }
}

pub fn parse_date(text: &str) -> Option<NaiveDate> {
    let text = text.trim();
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(text, "%d/%m/%Y"))
        .ok()
}

fn resolve(grid: &Grid, expected: &[&'static str]) -> Result<HashMap<&'static str, usize>, ScrapeError> {
    expected
        .iter()
        .map(|&label| {
            grid.columns
                .get(&label_key(label))
                .map(|&i| (label, i))
                .ok_or_else(|| ScrapeError::SchemaDrift(label.into()))
        })
        .collect()
}

fn rows<T>(
    html: &str,
    expected: &[&'static str],
    build: impl Fn(&Row<'_>) -> Result<T, ScrapeError>,
) -> Result<Vec<T>, ScrapeError> {
    let Some(grid) = grid(html)? else {
        return Ok(Vec::new());
    };
    let index = resolve(&grid, expected)?;
    grid.rows
        .iter()
        .map(|cells| build(&Row { cells, index: &index }))
        .collect()
}

fn relation(text: &str) -> Option<Relation> {
    Relation::from_code(text).or_else(|| match text.to_ascii_lowercase().as_str() {
        "father" => Some(Relation::Father),
        "mother" => Some(Relation::Mother),
        "husband" => Some(Relation::Husband),
        _ => None,
    })
}

fn gender(text: &str) -> Option<Gender> {
    Gender::from_code(text).or_else(|| match text.to_ascii_lowercase().as_str() {
        "male" => Some(Gender::M),
        "female" => Some(Gender::F),
        _ => None,
    })
}

fn licence_row(row: &Row<'_>) -> Result<LicenceRecord, ScrapeError> {
    let [no, name, rel, addr, dob, from, till, class] = DL_LABELS;
    Ok(LicenceRecord {
        dl_number: DlNumber::parse(row.get(no)?).map_err(|_| ScrapeError::SchemaDrift(no.into()))?,
        name: row.get(name)?.to_string(),
        address: row.get(addr)?.to_string(),
        relative_name: row.get(rel)?.to_string(),
        dob: row.date(dob)?,
        validity_period: ValidityPeriod {
            from: row.date(from)?,
            until: row.date(till)?,
        },
        vehicle_category: row.get(class)?.to_string(),
    })
}

fn voter_row(row: &Row<'_>) -> Result<VoterRecord, ScrapeError> {
    let [epic, name, rel_type, rel, age, sex, addr, ac] = VOTER_LABELS;
    Ok(VoterRecord {
        voter_id: row.get(epic)?.to_string(),
        name: row.get(name)?.to_string(),
        relative_name: row.get(rel)?.to_string(),
        relation: relation(row.get(rel_type)?).ok_or_else(|| ScrapeError::SchemaDrift(rel_type.into()))?,
        age: row.parse(age)?,
        gender: gender(row.get(sex)?).ok_or_else(|| ScrapeError::SchemaDrift(sex.into()))?,
        address: row.get(addr)?.to_string(),
        constituency: row.parse(ac)?,
    })
}

fn pan_row(row: &Row<'_>) -> Result<PanRecord, ScrapeError> {
    let [pan, name, dob] = PAN_LABELS;
    Ok(PanRecord {
        pan: PanNumber::parse(row.get(pan)?).map_err(|_| ScrapeError::SchemaDrift(pan.into()))?,
        name: row.get(name)?.to_string(),
        dob: row.date(dob)?,
    })
}

fn phone_row(row: &Row<'_>) -> Result<PhoneRecord, ScrapeError> {
    let [name, addr, phone] = PHONE_LABELS;
    Ok(PhoneRecord {
        name: row.get(name)?.to_string(),
        address: row.get(addr)?.to_string(),
        phone: row.get(phone)?.to_string(),
    })
}

pub fn parse_dl_page(html: &str) -> Result<Option<LicenceRecord>, ScrapeError> {
    Ok(rows(html, &DL_LABELS, licence_row)?.into_iter().next())
}

pub fn parse_voter_page(html: &str) -> Result<Vec<VoterRecord>, ScrapeError> {
    rows(html, &VOTER_LABELS, voter_row)
}

pub fn parse_pan_page(html: &str) -> Result<Option<PanRecord>, ScrapeError> {
    Ok(rows(html, &PAN_LABELS, pan_row)?.into_iter().next())
}

pub fn parse_phone_page(html: &str) -> Result<Vec<PhoneRecord>, ScrapeError> {
    rows(html, &PHONE_LABELS, phone_row)
}

pub fn parse_page(kind: PageKind, html: &str) -> Result<ParseOutcome, ScrapeError> {
    let records = match kind {
        PageKind::Dl => parse_dl_page(html)?.into_iter().map(SourceRecord::Dl).collect(),
        PageKind::Voter => parse_voter_page(html)?.into_iter().map(SourceRecord::Voter).collect(),
        PageKind::Pan => parse_pan_page(html)?.into_iter().map(SourceRecord::Pan).collect(),
        PageKind::Phone => parse_phone_page(html)?.into_iter().map(SourceRecord::Phone).collect(),
    };
    Ok(ParseOutcome {
        records,
        page_kind: kind,
        truncated: truncated(html),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portal::{render_dl_page, render_pan_page, render_phone_page, render_voter_page};
    use crate::synth::{synthesize, SynthConfig};
    use proptest::prelude::*;

    #[test]
    fn corpus_round_trips_field_exact() {
        let (corpus, _) = synthesize(&SynthConfig::new(11, 400)).unwrap();
        for l in &corpus.licences {
            assert_eq!(parse_dl_page(&render_dl_page(Some(l))).unwrap().as_ref(), Some(l));
        }
        for p in &corpus.pans {
            assert_eq!(parse_pan_page(&render_pan_page(Some(p))).unwrap().as_ref(), Some(p));
        }
        for chunk in corpus.voters.chunks(7) {
            assert_eq!(parse_voter_page(&render_voter_page(chunk, false)).unwrap(), chunk);
        }
        assert_eq!(parse_phone_page(&render_phone_page(&corpus.phones, false)).unwrap(), corpus.phones);
    }

    #[test]
    fn no_records_page_is_empty() {
        assert_eq!(parse_voter_page(&render_voter_page(&[], false)).unwrap(), vec![]);
        assert_eq!(parse_dl_page(&render_dl_page(None)).unwrap(), None);
        assert_eq!(parse_pan_page(&render_pan_page(None)).unwrap(), None);
    }

    #[test]
    fn misspelt_label_is_schema_drift() {
        let (corpus, _) = synthesize(&SynthConfig::new(2, 50)).unwrap();
        let html = render_voter_page(&corpus.voters[..2], false).replace("<th>Name</th>", "<th>Nmae</th>");
        assert_eq!(parse_voter_page(&html), Err(ScrapeError::SchemaDrift("Name".into())));
    }

    #[test]
    fn reordered_and_restyled_columns_still_parse() {
        let html = "<html><body><TABLE class=x>\
            <tr><th> phone   no </th><TH>ADDRESS</TH><th>name</th></tr>\
            <tr><td>23456789</td><td>  12/B,  Karol Bagh, Delhi </td><td>Anil Kapoor</td></tr>\
            </TABLE><p>Result truncated: showing first 1 records.</p></body></html>";
        let out = parse_page(PageKind::Phone, html).unwrap();
        assert!(out.truncated);
        assert_eq!(
            out.records,
            vec![SourceRecord::Phone(PhoneRecord {
                name: "Anil Kapoor".into(),
                address: "12/B, Karol Bagh, Delhi".into(),
                phone: "23456789".into(),
            })]
        );
    }

    #[test]
    fn dates_accept_both_layouts() {
        let d = NaiveDate::from_ymd_opt(1980, 3, 4).unwrap();
        assert_eq!(parse_date("1980-03-04"), Some(d));
        assert_eq!(parse_date("04/03/1980"), Some(d));
        assert_eq!(parse_date("March 4 1980"), None);
    }

    #[test]
    fn bad_date_cell_is_schema_drift() {
        let html = "<table><tr><th>PAN</th><th>Name</th><th>DOB</th></tr>\
            <tr><td>ABCDE1234F</td><td>X Y</td><td>1980.03.04</td></tr></table>";
        assert_eq!(parse_pan_page(html), Err(ScrapeError::SchemaDrift("DOB".into())));
    }

    #[test]
    fn page_without_table_is_malformed() {
        assert!(matches!(parse_voter_page("<html><p>maintenance</p></html>"), Err(ScrapeError::MalformedPage(_))));
    }

    proptest! {
        #[test]
        fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
            let text = String::from_utf8_lossy(&bytes);
            for kind in [PageKind::Dl, PageKind::Voter, PageKind::Pan, PageKind::Phone] {
                let _ = parse_page(kind, &text);
            }
        }

        #[test]
        fn tag_soup_never_panics(parts in proptest::collection::vec(
            prop_oneof![
                Just("<table>".to_string()), Just("<tr>".to_string()), Just("<th>Name</th>".to_string()),
                Just("<td>".to_string()), Just("</td>".to_string()), Just("</table>".to_string()),
                "[a-zA-Z0-9 /-]{0,12}",
            ], 0..40)) {
            let html = parts.concat();
            for kind in [PageKind::Dl, PageKind::Voter, PageKind::Pan, PageKind::Phone] {
                let _ = parse_page(kind, &html);
            }
        }
    }
}
