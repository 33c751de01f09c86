use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ids::{DlNumber, PanNumber};
use super::normalize::{normalize_address, normalize_name, NormAddress, NormName};

/// Delhi is divided into this many assembly constituencies.
pub const CONSTITUENCIES: u8 = 70;
pub const MIN_VOTER_AGE: u32 = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("constituency {0} outside 1..=70")]
    Constituency(u8),
    #[error("voter {0} is under 18")]
    Underage(String),
    #[error("licence {0} issued before the holder turned 18")]
    UnderageLicence(String),
    #[error("{0} profile carries cross-links; only foursquare may")]
    CrossLinks(SocialNetwork),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Voter,
    Dl,
    Pan,
    Phone,
    Social,
}

impl Source {
    pub const ALL: [Source; 5] = [
        Source::Voter,
        Source::Dl,
        Source::Pan,
        Source::Phone,
        Source::Social,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Voter => "voter",
            Source::Dl => "dl",
            Source::Pan => "pan",
            Source::Phone => "phone",
            Source::Social => "social",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Source::Voter => "voter.jsonl",
            Source::Dl => "dl.jsonl",
            Source::Pan => "pan.jsonl",
            Source::Phone => "phone.jsonl",
            Source::Social => "social.jsonl",
        }
    }

    /// Identity databases that take part in cross-database linkage.
    pub fn is_identity_db(self) -> bool {
        matches!(self, Source::Voter | Source::Dl | Source::Pan)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Father,
    Mother,
    Husband,
}

impl Relation {
    /// Single-letter code printed on voter rolls.
    pub fn code(self) -> &'static str {
        match self {
            Relation::Father => "F",
            Relation::Mother => "M",
            Relation::Husband => "H",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code.trim().to_ascii_uppercase().as_str() {
            "F" | "FATHER" => Some(Relation::Father),
            "M" | "MOTHER" => Some(Relation::Mother),
            "H" | "HUSBAND" => Some(Relation::Husband),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    M,
    F,
}

impl Gender {
    pub fn code(self) -> &'static str {
        match self {
            Gender::M => "M",
            Gender::F => "F",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code.trim().to_ascii_uppercase().as_str() {
            "M" | "MALE" => Some(Gender::M),
            "F" | "FEMALE" => Some(Gender::F),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoterRecord {
    pub voter_id: String,
    pub name: String,
    pub relative_name: String,
    pub relation: Relation,
    pub age: u32,
    pub gender: Gender,
    pub address: String,
    pub constituency: u8,
}

impl VoterRecord {
    pub fn validate(&self) -> Result<(), RecordError> {
        if !(1..=CONSTITUENCIES).contains(&self.constituency) {
            return Err(RecordError::Constituency(self.constituency));
        }
        if self.age < MIN_VOTER_AGE {
            return Err(RecordError::Underage(self.voter_id.clone()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityPeriod {
    pub from: NaiveDate,
    pub until: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LicenceRecord {
    pub dl_number: DlNumber,
    pub name: String,
    pub address: String,
    pub relative_name: String,
    pub dob: NaiveDate,
    pub validity_period: ValidityPeriod,
    pub vehicle_category: String,
}

impl LicenceRecord {
    pub fn validate(&self) -> Result<(), RecordError> {
        use chrono::Datelike;
        if i32::from(self.dl_number.year()) - self.dob.year() < MIN_VOTER_AGE as i32 {
            return Err(RecordError::UnderageLicence(self.dl_number.to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanRecord {
    pub pan: PanNumber,
    pub name: String,
    pub dob: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhoneRecord {
    pub name: String,
    pub address: String,
    pub phone: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SocialNetwork {
    Twitter,
    Facebook,
    Foursquare,
    Linkedin,
    Googleplus,
}

impl SocialNetwork {
    pub const ALL: [SocialNetwork; 5] = [
        SocialNetwork::Twitter,
        SocialNetwork::Facebook,
        SocialNetwork::Foursquare,
        SocialNetwork::Linkedin,
        SocialNetwork::Googleplus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SocialNetwork::Twitter => "twitter",
            SocialNetwork::Facebook => "facebook",
            SocialNetwork::Foursquare => "foursquare",
            SocialNetwork::Linkedin => "linkedin",
            SocialNetwork::Googleplus => "googleplus",
        }
    }
}

impl fmt::Display for SocialNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossLink {
    pub network: SocialNetwork,
    pub handle: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocialProfile {
    pub network: SocialNetwork,
    pub network_id: String,
    pub display_name: String,
    pub handle: String,
    pub location: Option<String>,
    pub profile_url: String,
    #[serde(default)]
    pub cross_links: Vec<CrossLink>,
}

impl SocialProfile {
    pub fn validate(&self) -> Result<(), RecordError> {
        if !self.cross_links.is_empty() && self.network != SocialNetwork::Foursquare {
            return Err(RecordError::CrossLinks(self.network));
        }
        Ok(())
    }
}

/// One attribute of a person that a source can expose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    VoterId,
    DlNumber,
    PanNumber,
    FullName,
    Address,
    Age,
    Dob,
    RelativeName,
    Gender,
    PhoneNumber,
}

impl Attribute {
    pub const ALL: [Attribute; 10] = [
        Attribute::VoterId,
        Attribute::DlNumber,
        Attribute::PanNumber,
        Attribute::FullName,
        Attribute::Address,
        Attribute::Age,
        Attribute::Dob,
        Attribute::RelativeName,
        Attribute::Gender,
        Attribute::PhoneNumber,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::VoterId => "voter_id",
            Attribute::DlNumber => "dl_number",
            Attribute::PanNumber => "pan_number",
            Attribute::FullName => "full_name",
            Attribute::Address => "address",
            Attribute::Age => "age",
            Attribute::Dob => "dob",
            Attribute::RelativeName => "relative_name",
            Attribute::Gender => "gender",
            Attribute::PhoneNumber => "phone_number",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        let key = text.trim().to_ascii_lowercase().replace([' ', '-', '\''], "_");
        let key = match key.as_str() {
            "home_address" => "address",
            "name" => "full_name",
            "date_of_birth" => "dob",
            "father_s_name" | "fathers_name" | "relative" => "relative_name",
            "dl" | "driving_licence_number" | "driving_license_number" => "dl_number",
            "pan" | "pan_card_number" => "pan_number",
            "voter_id_number" | "epic" => "voter_id",
            "phone" | "mobile_number" => "phone_number",
            k => k,
        };
        Self::ALL.into_iter().find(|a| a.as_str() == key)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A harvested row from any source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", content = "record", rename_all = "lowercase")]
pub enum SourceRecord {
    Voter(VoterRecord),
    Dl(LicenceRecord),
    Pan(PanRecord),
    Phone(PhoneRecord),
    Social(SocialProfile),
}

impl SourceRecord {
    pub fn source(&self) -> Source {
        match self {
            SourceRecord::Voter(_) => Source::Voter,
            SourceRecord::Dl(_) => Source::Dl,
            SourceRecord::Pan(_) => Source::Pan,
            SourceRecord::Phone(_) => Source::Phone,
            SourceRecord::Social(_) => Source::Social,
        }
    }

    /// Primary key within the source.
    pub fn primary_key(&self) -> String {
        match self {
            SourceRecord::Voter(r) => r.voter_id.clone(),
            SourceRecord::Dl(r) => r.dl_number.to_string(),
            SourceRecord::Pan(r) => r.pan.to_string(),
            SourceRecord::Phone(r) => r.phone.clone(),
            SourceRecord::Social(r) => format!("{}:{}", r.network, r.network_id),
        }
    }

    /// Globally unique key, `source:primary_key`.
    pub fn key(&self) -> String {
        format!("{}:{}", self.source(), self.primary_key())
    }

    pub fn name(&self) -> &str {
        match self {
            SourceRecord::Voter(r) => &r.name,
            SourceRecord::Dl(r) => &r.name,
            SourceRecord::Pan(r) => &r.name,
            SourceRecord::Phone(r) => &r.name,
            SourceRecord::Social(r) => &r.display_name,
        }
    }

    pub fn norm_name(&self) -> NormName {
        normalize_name(self.name())
    }

    pub fn address(&self) -> Option<&str> {
        match self {
            SourceRecord::Voter(r) => Some(&r.address),
            SourceRecord::Dl(r) => Some(&r.address),
            SourceRecord::Phone(r) => Some(&r.address),
            SourceRecord::Social(r) => r.location.as_deref(),
            SourceRecord::Pan(_) => None,
        }
    }

    pub fn norm_address(&self) -> NormAddress {
        self.address().map(normalize_address).unwrap_or_default()
    }

    /// Attributes this record actually discloses.
    pub fn exposed_attributes(&self) -> BTreeSet<Attribute> {
        let mut out = BTreeSet::new();
        let mut put = |present: bool, a: Attribute| {
            if present {
                out.insert(a);
            }
        };
        match self {
            SourceRecord::Voter(r) => {
                put(!r.voter_id.is_empty(), Attribute::VoterId);
                put(!r.name.trim().is_empty(), Attribute::FullName);
                put(!r.relative_name.trim().is_empty(), Attribute::RelativeName);
                put(true, Attribute::Age);
                put(true, Attribute::Gender);
                put(!r.address.trim().is_empty(), Attribute::Address);
            }
            SourceRecord::Dl(r) => {
                put(true, Attribute::DlNumber);
                put(!r.name.trim().is_empty(), Attribute::FullName);
                put(!r.relative_name.trim().is_empty(), Attribute::RelativeName);
                put(true, Attribute::Dob);
                put(!r.address.trim().is_empty(), Attribute::Address);
            }
            SourceRecord::Pan(r) => {
                put(true, Attribute::PanNumber);
                put(!r.name.trim().is_empty(), Attribute::FullName);
                put(true, Attribute::Dob);
            }
            SourceRecord::Phone(r) => {
                put(!r.phone.is_empty(), Attribute::PhoneNumber);
                put(!r.name.trim().is_empty(), Attribute::FullName);
                put(!r.address.trim().is_empty(), Attribute::Address);
            }
            SourceRecord::Social(r) => {
                put(!r.display_name.trim().is_empty(), Attribute::FullName);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn voter() -> VoterRecord {
        VoterRecord {
            voter_id: "ABC1234567".into(),
            name: "RAHUL SHARMA".into(),
            relative_name: "RAM SHARMA".into(),
            relation: Relation::Father,
            age: 24,
            gender: Gender::M,
            address: "H NO 12, C BLOCK, LAJPAT NGR, NEW DELHI".into(),
            constituency: 41,
        }
    }

    #[test]
    fn voter_invariants() {
        assert!(voter().validate().is_ok());
        let mut v = voter();
        v.constituency = 71;
        assert_eq!(v.validate(), Err(RecordError::Constituency(71)));
        let mut v = voter();
        v.age = 17;
        assert!(matches!(v.validate(), Err(RecordError::Underage(_))));
    }

    #[test]
    fn voter_exposes_six_attributes() {
        let attrs = SourceRecord::Voter(voter()).exposed_attributes();
        assert_eq!(attrs.len(), 6);
        assert!(attrs.contains(&Attribute::VoterId));
        assert!(!attrs.contains(&Attribute::Dob));
    }

    #[test]
    fn only_foursquare_carries_links() {
        let mut p = SocialProfile {
            network: SocialNetwork::Twitter,
            network_id: "1".into(),
            display_name: "Ram".into(),
            handle: "ram".into(),
            location: None,
            profile_url: "https://social.example/twitter/ram".into(),
            cross_links: vec![CrossLink {
                network: SocialNetwork::Facebook,
                handle: "ram.fb".into(),
            }],
        };
        assert!(p.validate().is_err());
        p.network = SocialNetwork::Foursquare;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn attribute_names_round_trip() {
        for a in Attribute::ALL {
            assert_eq!(Attribute::parse(a.as_str()), Some(a));
        }
        assert_eq!(Attribute::parse("Full Name"), Some(Attribute::FullName));
        assert_eq!(Attribute::parse("shoe size"), None);
    }

    #[test]
    fn record_keys_are_source_scoped() {
        let r = SourceRecord::Voter(voter());
        assert_eq!(r.key(), "voter:ABC1234567");
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"source\":\"voter\""));
        let back: SourceRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
