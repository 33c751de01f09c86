use serde::{Deserialize, Serialize};

use super::normalize::{NormAddress, NormName};

pub const DEFAULT_ADDRESS_THRESHOLD: f64 = 0.8;

pub fn levenshtein(a: &str, b: &str) -> usize {
    strsim::levenshtein(a, b)
}

/// Per-token edit distances, `None` when the token counts differ.
pub fn name_distance(a: &NormName, b: &NormName) -> Option<Vec<usize>> {
    if a.tokens().len() != b.tokens().len() {
        return None;
    }
    Some(
        a.tokens()
            .iter()
            .zip(b.tokens())
            .map(|(x, y)| levenshtein(x, y))
            .collect(),
    )
}

/// Same token count and at most one edit in every aligned token pair.
pub fn name_match(a: &NormName, b: &NormName) -> bool {
    if a.tokens().len() != b.tokens().len() {
        return false;
    }
    a.tokens().iter().zip(b.tokens()).all(|(x, y)| {
        // length gap > 1 already rules out a single edit
        x.len().abs_diff(y.len()) <= 1 && (x == y || levenshtein(x, y) <= 1)
    })
}

/// Jaccard overlap of two address token sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AddressMatch {
    pub shared: usize,
    pub union: usize,
    pub score: f64,
    pub matched: bool,
}

pub fn address_match(a: &NormAddress, b: &NormAddress) -> AddressMatch {
    address_match_with(a, b, DEFAULT_ADDRESS_THRESHOLD)
}

pub fn address_match_with(a: &NormAddress, b: &NormAddress, threshold: f64) -> AddressMatch {
    let shared = a.tokens().intersection(b.tokens()).count();
    let union = a.len() + b.len() - shared;
    if union == 0 {
        return AddressMatch {
            shared: 0,
            union: 0,
            score: 0.0,
            matched: false,
        };
    }
    let score = shared as f64 / union as f64;
    AddressMatch {
        shared,
        union,
        score,
        matched: score >= threshold,
    }
}
