//! On-disk record store shared by the corpus writer, the harvester and the
//! linker: one JSON-Lines file per source, each line a record optionally
//! carrying its harvest provenance.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::domain::{
    DlNumber, LicenceRecord, PanRecord, PhoneRecord, SocialProfile, Source, SourceRecord,
    VoterRecord,
};
pub use crate::jsonl::JsonlError as StoreError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: Source,
    pub query: String,
    pub timestamp: DateTime<Utc>,
    /// Licence whose name and DOB seeded a chained PAN query.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chained_from: Option<DlNumber>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stored<T> {
    #[serde(flatten)]
    pub record: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl<T> Stored<T> {
    pub fn bare(record: T) -> Self {
        Self {
            record,
            provenance: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Store {
    pub voters: Vec<Stored<VoterRecord>>,
    pub licences: Vec<Stored<LicenceRecord>>,
    pub pans: Vec<Stored<PanRecord>>,
    pub phones: Vec<Stored<PhoneRecord>>,
    pub social: Vec<Stored<SocialProfile>>,
}

impl Store {
    pub fn load(dir: &Path) -> Result<Self, StoreError> {
        Ok(Self {
            voters: crate::jsonl::read(&dir.join(Source::Voter.file_name()))?,
            licences: crate::jsonl::read(&dir.join(Source::Dl.file_name()))?,
            pans: crate::jsonl::read(&dir.join(Source::Pan.file_name()))?,
            phones: crate::jsonl::read(&dir.join(Source::Phone.file_name()))?,
            social: crate::jsonl::read(&dir.join(Source::Social.file_name()))?,
        })
    }

    /// Writes every source file, sorted by primary key.
    pub fn save(&self, dir: &Path) -> Result<(), StoreError> {
        let mut s = self.clone();
        s.sort();
        crate::jsonl::write(&dir.join(Source::Voter.file_name()), &s.voters)?;
        crate::jsonl::write(&dir.join(Source::Dl.file_name()), &s.licences)?;
        crate::jsonl::write(&dir.join(Source::Pan.file_name()), &s.pans)?;
        crate::jsonl::write(&dir.join(Source::Phone.file_name()), &s.phones)?;
        crate::jsonl::write(&dir.join(Source::Social.file_name()), &s.social)?;
        Ok(())
    }

    pub fn sort(&mut self) {
        self.voters
            .sort_by(|a, b| a.record.voter_id.cmp(&b.record.voter_id));
        self.licences
            .sort_by(|a, b| a.record.dl_number.cmp(&b.record.dl_number));
        self.pans.sort_by(|a, b| a.record.pan.cmp(&b.record.pan));
        self.phones.sort_by(|a, b| a.record.phone.cmp(&b.record.phone));
        self.social.sort_by(|a, b| {
            (a.record.network, &a.record.network_id).cmp(&(b.record.network, &b.record.network_id))
        });
    }

    pub fn is_empty(&self) -> bool {
        self.voters.is_empty()
            && self.licences.is_empty()
            && self.pans.is_empty()
            && self.phones.is_empty()
            && self.social.is_empty()
    }

    pub fn counts(&self) -> BTreeMap<Source, usize> {
        BTreeMap::from([
            (Source::Voter, self.voters.len()),
            (Source::Dl, self.licences.len()),
            (Source::Pan, self.pans.len()),
            (Source::Phone, self.phones.len()),
            (Source::Social, self.social.len()),
        ])
    }

    pub fn records(&self) -> impl Iterator<Item = SourceRecord> + '_ {
        let v = self.voters.iter().map(|s| SourceRecord::Voter(s.record.clone()));
        let d = self.licences.iter().map(|s| SourceRecord::Dl(s.record.clone()));
        let p = self.pans.iter().map(|s| SourceRecord::Pan(s.record.clone()));
        let ph = self.phones.iter().map(|s| SourceRecord::Phone(s.record.clone()));
        let so = self.social.iter().map(|s| SourceRecord::Social(s.record.clone()));
        v.chain(d).chain(p).chain(ph).chain(so)
    }

    pub fn voter_records(&self) -> Vec<VoterRecord> {
        self.voters.iter().map(|s| s.record.clone()).collect()
    }

    pub fn social_profiles(&self) -> Vec<SocialProfile> {
        self.social.iter().map(|s| s.record.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{PanNumber, Relation, Gender};

    #[test]
    fn provenance_is_flattened_next_to_fields() {
        let stored = Stored {
            record: PanRecord {
                pan: PanNumber::parse("ABCDE1234F").unwrap(),
                name: "RAM KUMAR".into(),
                dob: chrono::NaiveDate::from_ymd_opt(1980, 5, 1).unwrap(),
            },
            provenance: Some(Provenance {
                source: Source::Pan,
                query: "/pan?first=RAM&last=KUMAR&dob=1980-05-01".into(),
                timestamp: DateTime::from_timestamp(0, 0).unwrap(),
                chained_from: Some(DlNumber::parse("DL-0120100000001").unwrap()),
            }),
        };
        let json = serde_json::to_value(&stored).unwrap();
        assert_eq!(json["pan"], "ABCDE1234F");
        assert_eq!(json["provenance"]["chained_from"], "DL-0120100000001");
        let back: Stored<PanRecord> = serde_json::from_value(json).unwrap();
        assert_eq!(back, stored);
    }

    #[test]
    fn bare_records_read_without_provenance() {
        let line = r#"{"voter_id":"X1","name":"A B","relative_name":"C B","relation":"father","age":30,"gender":"M","address":"H NO 1","constituency":3}"#;
        let s: Stored<VoterRecord> = serde_json::from_str(line).unwrap();
        assert!(s.provenance.is_none());
        assert_eq!(s.record.relation, Relation::Father);
        assert_eq!(s.record.gender, Gender::M);
    }

    #[test]
    fn missing_directory_loads_empty() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::load(&dir.path().join("nope")).unwrap();
        assert!(store.is_empty());
    }
}
