use std::collections::HashMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::domain::{DlNumber, Gender, PanNumber, SocialNetwork, Source};

/// The five presence patterns over the identity databases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresenceCase {
    VoterOnly,
    DlOnly,
    /// PAN is only reachable through a licence, so this case also carries a DL.
    PanDl,
    VoterDl,
    VoterDlPan,
}

impl PresenceCase {
    pub const ALL: [PresenceCase; 5] = [
        PresenceCase::VoterOnly,
        PresenceCase::DlOnly,
        PresenceCase::PanDl,
        PresenceCase::VoterDl,
        PresenceCase::VoterDlPan,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn has_voter(self) -> bool {
        matches!(
            self,
            PresenceCase::VoterOnly | PresenceCase::VoterDl | PresenceCase::VoterDlPan
        )
    }

    pub fn has_dl(self) -> bool {
        !matches!(self, PresenceCase::VoterOnly)
    }

    pub fn has_pan(self) -> bool {
        matches!(self, PresenceCase::PanDl | PresenceCase::VoterDlPan)
    }

    /// Classifies a set of identity sources; `None` for patterns outside the five.
    pub fn from_sources(voter: bool, dl: bool, pan: bool) -> Option<Self> {
        match (voter, dl, pan) {
            (true, false, false) => Some(PresenceCase::VoterOnly),
            (false, true, false) => Some(PresenceCase::DlOnly),
            (false, true, true) => Some(PresenceCase::PanDl),
            (true, true, false) => Some(PresenceCase::VoterDl),
            (true, true, true) => Some(PresenceCase::VoterDlPan),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PresenceCase::VoterOnly => "Voter ID only",
            PresenceCase::DlOnly => "Driving licence only",
            PresenceCase::PanDl => "PAN (chained from licence)",
            PresenceCase::VoterDl => "Voter ID + driving licence",
            PresenceCase::VoterDlPan => "Voter ID + driving licence + PAN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocialHandle {
    pub network: SocialNetwork,
    pub network_id: String,
    pub handle: String,
}

/// One person of the synthetic population and every record planted for them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonTruth {
    pub person_id: String,
    pub household_id: String,
    pub name: String,
    pub gender: Gender,
    pub age: u32,
    pub dob: NaiveDate,
    /// Household address before any source-specific rendering.
    pub address: String,
    pub constituency: u8,
    pub case: Option<PresenceCase>,
    pub voter_id: Option<String>,
    pub dl_number: Option<DlNumber>,
    pub pan: Option<PanNumber>,
    pub phone: Option<String>,
    #[serde(default)]
    pub social: Vec<SocialHandle>,
    pub father_id: Option<String>,
    pub mother_id: Option<String>,
    pub spouse_id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KinKind {
    FatherOf,
    MotherOf,
    SpouseOf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KinEdge {
    pub kind: KinKind,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub persons: Vec<PersonTruth>,
}

impl GroundTruth {
    pub fn is_empty(&self) -> bool {
        self.persons.is_empty()
    }

    pub fn person(&self, person_id: &str) -> Option<&PersonTruth> {
        self.persons.iter().find(|p| p.person_id == person_id)
    }

    /// Record key (`source:primary_key`) to owning person id.
    pub fn owners(&self) -> HashMap<String, String> {
        let mut out = HashMap::new();
        for p in &self.persons {
            let id = &p.person_id;
            if let Some(v) = &p.voter_id {
                out.insert(format!("{}:{v}", Source::Voter), id.clone());
            }
            if let Some(d) = &p.dl_number {
                out.insert(format!("{}:{d}", Source::Dl), id.clone());
            }
            if let Some(pan) = &p.pan {
                out.insert(format!("{}:{pan}", Source::Pan), id.clone());
            }
            if let Some(ph) = &p.phone {
                out.insert(format!("{}:{ph}", Source::Phone), id.clone());
            }
            for s in &p.social {
                out.insert(
                    format!("{}:{}:{}", Source::Social, s.network, s.network_id),
                    id.clone(),
                );
            }
        }
        out
    }

    pub fn kin_edges(&self) -> Vec<KinEdge> {
        let mut out = Vec::new();
        for p in &self.persons {
            if let Some(f) = &p.father_id {
                out.push(KinEdge {
                    kind: KinKind::FatherOf,
                    from: f.clone(),
                    to: p.person_id.clone(),
                });
            }
            if let Some(m) = &p.mother_id {
                out.push(KinEdge {
                    kind: KinKind::MotherOf,
                    from: m.clone(),
                    to: p.person_id.clone(),
                });
            }
            if let Some(s) = &p.spouse_id {
                out.push(KinEdge {
                    kind: KinKind::SpouseOf,
                    from: p.person_id.clone(),
                    to: s.clone(),
                });
            }
        }
        out
    }

    pub fn adults(&self) -> impl Iterator<Item = &PersonTruth> {
        self.persons.iter().filter(|p| p.age >= crate::domain::MIN_VOTER_AGE)
    }
}
