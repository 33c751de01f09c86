use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::domain::{SocialNetwork, SocialProfile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedLocation {
    pub text: String,
    pub network: SocialNetwork,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinedProfile {
    pub members: Vec<SocialProfile>,
    pub derived_location: Option<DerivedLocation>,
    /// Set when this profile's link component held two profiles of one
    /// network and was therefore left unmerged.
    #[serde(default)]
    pub conflicting_links: bool,
}

impl CombinedProfile {
    pub fn member(&self, network: SocialNetwork) -> Option<&SocialProfile> {
        self.members.iter().find(|p| p.network == network)
    }
}

const LOCATION_PRECEDENCE: [SocialNetwork; 3] = [
    SocialNetwork::Foursquare,
    SocialNetwork::Twitter,
    SocialNetwork::Googleplus,
];

/// First non-blank location among the foursquare, twitter and google+ members.
pub fn derive_location(members: &[SocialProfile]) -> Option<DerivedLocation> {
    LOCATION_PRECEDENCE.iter().find_map(|&net| {
        members
            .iter()
            .filter(|p| p.network == net)
            .find_map(|p| p.location.as_deref().map(str::trim).filter(|l| !l.is_empty()))
            .map(|text| DerivedLocation {
                text: text.to_string(),
                network: net,
            })
    })
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Joins profiles along explicit cross-links only.
pub fn combine_social(profiles: &[SocialProfile]) -> Vec<CombinedProfile> {
    let mut sorted: Vec<&SocialProfile> = profiles.iter().collect();
    sorted.sort_by(|a, b| (a.network, &a.network_id).cmp(&(b.network, &b.network_id)));
    sorted.dedup_by(|a, b| a.network == b.network && a.network_id == b.network_id);

    let mut by_handle: HashMap<(SocialNetwork, String), Vec<usize>> = HashMap::new();
    for (i, p) in sorted.iter().enumerate() {
        by_handle
            .entry((p.network, p.handle.to_ascii_lowercase()))
            .or_default()
            .push(i);
    }
    let mut parent: Vec<usize> = (0..sorted.len()).collect();
    for (i, p) in sorted.iter().enumerate() {
        for link in &p.cross_links {
            let key = (link.network, link.handle.to_ascii_lowercase());
            for &j in by_handle.get(&key).into_iter().flatten() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut components: BTreeMap<usize, Vec<&SocialProfile>> = BTreeMap::new();
    for i in 0..sorted.len() {
        let root = find(&mut parent, i);
        components.entry(root).or_default().push(sorted[i]);
    }

    let mut out = Vec::new();
    for members in components.into_values() {
        let mut networks: Vec<SocialNetwork> = members.iter().map(|p| p.network).collect();
        networks.sort();
        let clash = networks.windows(2).any(|w| w[0] == w[1]);
        if clash {
            for p in members {
                let members = vec![p.clone()];
                out.push(CombinedProfile {
                    derived_location: derive_location(&members),
                    members,
                    conflicting_links: true,
                });
            }
        } else {
            let members: Vec<SocialProfile> = members.into_iter().cloned().collect();
            out.push(CombinedProfile {
                derived_location: derive_location(&members),
                members,
                conflicting_links: false,
            });
        }
    }
    out
}
