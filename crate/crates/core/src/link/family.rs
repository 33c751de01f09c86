use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::domain::{
    address_match_with, normalize_address, normalize_name, Gender, NormAddress, NormName,
    Relation, VoterRecord, DEFAULT_ADDRESS_THRESHOLD,
};
use crate::par::{self, ExecMode};

/// Minimum age gap between a parent and a child.
pub const PARENT_GAP: u32 = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTree {
    pub ego: String,
    pub father: Option<String>,
    pub mother: Option<String>,
    pub spouse: Option<String>,
    #[serde(default)]
    pub siblings: BTreeSet<String>,
}

impl FamilyTree {
    pub fn is_empty(&self) -> bool {
        self.father.is_none() && self.mother.is_none() && self.spouse.is_none() && self.siblings.is_empty()
    }

    /// Every relative's voter id.
    pub fn relatives(&self) -> impl Iterator<Item = &String> {
        self.father
            .iter()
            .chain(&self.mother)
            .chain(&self.spouse)
            .chain(&self.siblings)
    }
}

/// A voter with its normalised name, relative name and address.
pub struct Resident<'a> {
    pub record: &'a VoterRecord,
    name: NormName,
    relative: NormName,
    address: NormAddress,
}

impl<'a> Resident<'a> {
    pub fn new(record: &'a VoterRecord) -> Self {
        Self {
            record,
            name: normalize_name(&record.name),
            relative: normalize_name(&record.relative_name),
            address: normalize_address(&record.address),
        }
    }
}

fn names_match(a: &NormName, b: &NormName) -> bool {
    !a.is_empty() && crate::domain::name_match(a, b)
}

/// Smallest age gap to the ego, then smallest voter id.
fn closest<'a>(ego: &VoterRecord, cands: impl Iterator<Item = &'a Resident<'a>>) -> Option<String> {
    cands
        .min_by(|a, b| {
            let ga = a.record.age.abs_diff(ego.age);
            let gb = b.record.age.abs_diff(ego.age);
            ga.cmp(&gb).then(a.record.voter_id.cmp(&b.record.voter_id))
        })
        .map(|r| r.record.voter_id.clone())
}

/// Applies the kin rules to `ego` given the residents whose address matches
/// its own (the ego itself may be among them and is skipped).
fn resolve<'a>(ego: &Resident<'_>, housemates: &[&'a Resident<'a>]) -> FamilyTree {
    let e = ego.record;
    let others = || housemates.iter().copied().filter(|r| r.record.voter_id != e.voter_id);
    let mut tree = FamilyTree {
        ego: e.voter_id.clone(),
        ..FamilyTree::default()
    };
    let older = |r: &&Resident<'_>| r.record.age >= e.age + PARENT_GAP;

    match e.relation {
        Relation::Father => {
            tree.father = closest(
                e,
                others().filter(|r| names_match(&r.name, &ego.relative)).filter(older),
            );
            tree.mother = closest(
                e,
                others()
                    .filter(|r| r.record.gender == Gender::F && r.record.relation == Relation::Husband)
                    .filter(|r| names_match(&r.relative, &ego.relative)),
            );
            tree.siblings = others()
                .filter(|r| r.record.relation == Relation::Father && names_match(&r.relative, &ego.relative))
                .map(|r| r.record.voter_id.clone())
                .collect();
        }
        Relation::Mother => {
            tree.mother = closest(
                e,
                others()
                    .filter(|r| r.record.gender == Gender::F && names_match(&r.name, &ego.relative))
                    .filter(older),
            );
            tree.siblings = others()
                .filter(|r| r.record.relation == Relation::Mother && names_match(&r.relative, &ego.relative))
                .map(|r| r.record.voter_id.clone())
                .collect();
        }
        Relation::Husband => {}
    }

    tree.spouse = match e.relation {
        Relation::Husband => closest(e, others().filter(|r| names_match(&r.name, &ego.relative))),
        _ => closest(
            e,
            others().filter(|r| r.record.relation == Relation::Husband && names_match(&r.relative, &ego.name)),
        ),
    };
    tree
}

/// Tree of one ego against a list of voter records.
///
/// Relatives must be on the same constituency roll as the ego and live at an
/// address that matches the ego's.
pub fn build_family_tree(voters: &[VoterRecord], ego: &VoterRecord) -> FamilyTree {
    let ego_r = Resident::new(ego);
    let residents: Vec<Resident<'_>> = voters
        .iter()
        .filter(|v| v.constituency == ego.constituency)
        .map(Resident::new)
        .collect();
    let housemates: Vec<&Resident<'_>> = residents
        .iter()
        .filter(|r| address_match_with(&r.address, &ego_r.address, DEFAULT_ADDRESS_THRESHOLD).matched)
        .collect();
    resolve(&ego_r, &housemates)
}

/// Trees for every voter, in the order given.
pub fn build_family_trees(voters: &[VoterRecord], mode: ExecMode) -> Vec<FamilyTree> {
    let residents: Vec<Resident<'_>> = voters.iter().map(Resident::new).collect();
    let mut rolls: BTreeMap<u8, Vec<&Resident<'_>>> = BTreeMap::new();
    for r in &residents {
        rolls.entry(r.record.constituency).or_default().push(r);
    }
    par::map(mode, &residents, |ego| {
        let roll = rolls.get(&ego.record.constituency).map(Vec::as_slice).unwrap_or(&[]);
        let housemates: Vec<&Resident<'_>> = roll
            .iter()
            .copied()
            .filter(|r| address_match_with(&r.address, &ego.address, DEFAULT_ADDRESS_THRESHOLD).matched)
            .collect();
        resolve(ego, &housemates)
    })
}

/// Number of egos whose tree has at least one filled slot.
pub fn tree_coverage(trees: &[FamilyTree]) -> usize {
    trees.iter().filter(|t| !t.is_empty()).count()
}
