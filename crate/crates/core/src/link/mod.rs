//! Aggregation: cross-database dossiers, voter-roll family trees and
//! combined social profiles.

mod dossier;
mod family;
mod social;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::jsonl::{self, JsonlError};
use crate::store::Store;

pub use dossier::{link_cross_db, Dossier, LinkConfig, LinkEvidence, LinkRule};
pub use family::{build_family_tree, build_family_trees, tree_coverage, FamilyTree, Resident, PARENT_GAP};
pub use social::{combine_social, derive_location, CombinedProfile, DerivedLocation};

pub const DOSSIERS_FILE: &str = "dossiers.jsonl";
pub const TREES_FILE: &str = "trees.jsonl";
pub const COMBINED_SOCIAL_FILE: &str = "combined_social.jsonl";

/// Everything the linker derives from one store.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Linked {
    pub dossiers: Vec<Dossier>,
    pub trees: Vec<FamilyTree>,
    pub social: Vec<CombinedProfile>,
}

impl Linked {
    pub fn build(store: &Store, config: &LinkConfig) -> Self {
        let voters = store.voter_records();
        let (dossiers, trees) = crate::par::join(
            config.mode,
            || link_cross_db(store, config),
            || build_family_trees(&voters, config.mode),
        );
        Self {
            dossiers,
            trees,
            social: combine_social(&store.social_profiles()),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<(), JsonlError> {
        jsonl::write(&dir.join(DOSSIERS_FILE), &self.dossiers)?;
        jsonl::write(&dir.join(TREES_FILE), &self.trees)?;
        jsonl::write(&dir.join(COMBINED_SOCIAL_FILE), &self.social)
    }

    /// Reads linker output; missing files read as empty.
    pub fn read(dir: &Path) -> Result<Self, JsonlError> {
        Ok(Self {
            dossiers: jsonl::read(&dir.join(DOSSIERS_FILE))?,
            trees: jsonl::read(&dir.join(TREES_FILE))?,
            social: jsonl::read(&dir.join(COMBINED_SOCIAL_FILE))?,
        })
    }

    pub fn is_present(dir: &Path) -> bool {
        dir.join(DOSSIERS_FILE).is_file()
    }
}

/// Pairwise precision and recall of dossier membership.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkQuality {
    pub true_pairs: usize,
    pub predicted_pairs: usize,
    pub correct_pairs: usize,
    pub precision: f64,
    pub recall: f64,
}

fn pairs(groups: impl IntoIterator<Item = Vec<String>>) -> HashSet<(String, String)> {
    let mut out = HashSet::new();
    for mut g in groups {
        g.sort();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                out.insert((g[i].clone(), g[j].clone()));
            }
        }
    }
    out
}

/// Scores identity-record pairs (voter, DL, PAN) against an owner map
/// from record key to person. Empty denominators count as perfect.
pub fn pairwise_quality(dossiers: &[Dossier], owners: &HashMap<String, String>) -> LinkQuality {
    let identity = |d: &Dossier| -> Vec<String> {
        d.records()
            .iter()
            .filter(|r| r.source().is_identity_db())
            .map(|r| r.key())
            .collect()
    };
    let predicted = pairs(dossiers.iter().map(identity));
    let mut by_owner: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for key in dossiers.iter().flat_map(identity) {
        if let Some(owner) = owners.get(&key) {
            by_owner.entry(owner.as_str()).or_default().push(key);
        }
    }
    let truth = pairs(by_owner.into_values());
    let correct = predicted.intersection(&truth).count();
    let ratio = |n: usize, d: usize| if d == 0 { 1.0 } else { n as f64 / d as f64 };
    LinkQuality {
        true_pairs: truth.len(),
        predicted_pairs: predicted.len(),
        correct_pairs: correct,
        precision: ratio(correct, predicted.len()),
        recall: ratio(correct, truth.len()),
    }
}
