//! HTML pages in the shape of the four portals.
//!
//! Every result page carries a single `<table>` whose first row holds the
//! fixed header labels below; data cells follow in the same column order.
//! There are no ids or classes, so consumers must key on the labels.

use std::fmt::Write;

use crate::domain::{LicenceRecord, PanRecord, PhoneRecord, VoterRecord};

pub const NO_RECORDS: &str = "No records found";
/// Footer marker emitted when a result set was cut at the row cap.
pub const TRUNCATION_MARKER: &str = "Result truncated";
/// Marker of the cooperative challenge page.
pub const CHALLENGE_MARKER: &str = "Verification required";

pub const DL_LABELS: [&str; 8] = [
    "Licence No",
    "Name",
    "S/W/D of",
    "Address",
    "DOB",
    "Valid From",
    "Valid Till",
    "Class of Vehicle",
];
pub const VOTER_LABELS: [&str; 8] = [
    "EPIC No",
    "Name",
    "Relation Type",
    "S/W/D of",
    "Age",
    "Gender",
    "Address",
    "AC No",
];
pub const PAN_LABELS: [&str; 3] = ["PAN", "Name", "DOB"];
pub const PHONE_LABELS: [&str; 3] = ["Name", "Address", "Phone No"];

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>{t}</title></head>\n<body>\n<h2>{t}</h2>\n{body}</body>\n</html>\n",
        t = escape(title)
    )
}

fn table(labels: &[&str], rows: &[Vec<String>], truncated: bool) -> String {
    if rows.is_empty() {
        return format!("<p>{NO_RECORDS}</p>\n");
    }
    let mut out = String::from("<table border=\"1\" cellpadding=\"2\">\n<tr>");
    for l in labels {
        let _ = write!(out, "<th>{}</th>", escape(l));
    }
    out.push_str("</tr>\n");
    for row in rows {
        out.push_str("<tr>");
        for cell in row {
            let _ = write!(out, "<td>{}</td>", escape(cell));
        }
        out.push_str("</tr>\n");
    }
    out.push_str("</table>\n");
    if truncated {
        let _ = writeln!(
            out,
            "<p>{TRUNCATION_MARKER}: showing first {} records. Please refine your search.</p>",
            rows.len()
        );
    }
    out
}

pub fn render_dl_page(record: Option<&LicenceRecord>) -> String {
    let rows: Vec<Vec<String>> = record
        .into_iter()
        .map(|r| {
            vec![
                r.dl_number.to_string(),
                r.name.clone(),
                r.relative_name.clone(),
                r.address.clone(),
                r.dob.format("%d/%m/%Y").to_string(),
                r.validity_period.from.format("%Y-%m-%d").to_string(),
                r.validity_period.until.format("%Y-%m-%d").to_string(),
                r.vehicle_category.clone(),
            ]
        })
        .collect();
    page("Driving Licence Details", &table(&DL_LABELS, &rows, false))
}

pub fn render_voter_page(records: &[VoterRecord], truncated: bool) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.voter_id.clone(),
                r.name.clone(),
                r.relation.code().to_string(),
                r.relative_name.clone(),
                r.age.to_string(),
                r.gender.code().to_string(),
                r.address.clone(),
                r.constituency.to_string(),
            ]
        })
        .collect();
    page("Electoral Roll Search", &table(&VOTER_LABELS, &rows, truncated))
}

pub fn render_pan_page(record: Option<&PanRecord>) -> String {
    let rows: Vec<Vec<String>> = record
        .into_iter()
        .map(|r| {
            vec![
                r.pan.to_string(),
                r.name.clone(),
                r.dob.format("%Y-%m-%d").to_string(),
            ]
        })
        .collect();
    page("Know Your PAN", &table(&PAN_LABELS, &rows, false))
}

pub fn render_phone_page(records: &[PhoneRecord], truncated: bool) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| vec![r.name.clone(), r.address.clone(), r.phone.clone()])
        .collect();
    page("Telephone Directory", &table(&PHONE_LABELS, &rows, truncated))
}

pub fn render_challenge_page(token: &str) -> String {
    page(
        CHALLENGE_MARKER,
        &format!(
            "<p>{CHALLENGE_MARKER}. Type the code below and resubmit.</p>\n<p>Code: <code>{}</code></p>\n",
            escape(token)
        ),
    )
}

pub fn render_captcha_page(token: &str) -> String {
    page(
        "Verification code",
        &format!("<p>Code: <code>{}</code></p>\n", escape(token)),
    )
}

pub fn render_throttled_page(retry_after_secs: f64) -> String {
    page(
        "Too many requests",
        &format!("<p>Too many requests. Retry after {retry_after_secs:.3} seconds.</p>\n"),
    )
}

pub fn render_error_page(status: u16, message: &str) -> String {
    page(&format!("Error {status}"), &format!("<p>{}</p>\n", escape(message)))
}

/// Extracts the token from a challenge or captcha page.
pub fn extract_token(html: &str) -> Option<String> {
    let start = html.find("<code>")? + "<code>".len();
    let end = html[start..].find("</code>")? + start;
    let token = html[start..end].trim();
    (!token.is_empty()).then(|| token.to_string())
}
