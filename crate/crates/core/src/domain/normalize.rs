use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Uppercase name tokens in their original order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct NormName(Vec<String>);

impl NormName {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.0.first().map(String::as_str)
    }

    pub fn last(&self) -> Option<&str> {
        self.0.last().map(String::as_str)
    }

    /// Tokens joined by single spaces; the key used for prefix lookups.
    pub fn joined(&self) -> String {
        self.0.join(" ")
    }
}

impl fmt::Display for NormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.joined())
    }
}

/// Uppercase address tokens as a set, abbreviations expanded.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NormAddress(BTreeSet<String>);

impl NormAddress {
    pub fn tokens(&self) -> &BTreeSet<String> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_all(&self, other: &NormAddress) -> bool {
        other.0.is_subset(&self.0)
    }

    pub fn joined(&self) -> String {
        self.0.iter().map(String::as_str).collect::<Vec<_>>().join(" ")
    }
}

fn tokenize(text: &str) -> Vec<String> {
    text.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_uppercase()
            } else {
                ' '
            }
        })
        .collect::<String>()
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

pub fn normalize_name(text: &str) -> NormName {
    NormName(tokenize(text))
}

// Single-token abbreviations; `H NO` is handled as a two-token pattern.
const ABBREVIATIONS: &[(&str, &str)] = &[
    ("RD", "ROAD"),
    ("ST", "STREET"),
    ("APT", "APARTMENT"),
    ("NGR", "NAGAR"),
];

pub fn normalize_address(text: &str) -> NormAddress {
    let tokens = tokenize(text);
    let mut out = BTreeSet::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = tokens[i].as_str();
        if tok == "H" && tokens.get(i + 1).map(String::as_str) == Some("NO") {
            out.insert("HOUSE".to_string());
            i += 2;
            continue;
        }
        let expanded = ABBREVIATIONS
            .iter()
            .find(|(abbr, _)| *abbr == tok)
            .map_or(tok, |(_, full)| full);
        out.insert(expanded.to_string());
        i += 1;
    }
    NormAddress(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(tokens: &[&str]) -> BTreeSet<String> {
        tokens.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn name_is_uppercased_and_collapsed() {
        let n = normalize_name(" Srishti  GUPTA ");
        assert_eq!(n.tokens(), ["SRISHTI", "GUPTA"]);
    }

    #[test]
    fn name_punctuation_splits_tokens() {
        assert_eq!(normalize_name("o'neil-kumar.").tokens(), ["O", "NEIL", "KUMAR"]);
    }

    #[test]
    fn empty_inputs() {
        assert!(normalize_name("").is_empty());
        assert!(normalize_name(" ,. ").is_empty());
        assert!(normalize_address("").is_empty());
    }

    #[test]
    fn address_expands_dictionary() {
        let a = normalize_address("A-12, Lajpat Ngr, Delhi");
        assert_eq!(a.tokens(), &set(&["A", "12", "LAJPAT", "NAGAR", "DELHI"]));
    }

    #[test]
    fn house_number_prefix_expands() {
        let a = normalize_address("H.No. 7, Mall Rd");
        assert_eq!(a.tokens(), &set(&["HOUSE", "7", "MALL", "ROAD"]));
        let b = normalize_address("Apt 3, Park St");
        assert_eq!(b.tokens(), &set(&["APARTMENT", "3", "PARK", "STREET"]));
    }

    #[test]
    fn unlisted_abbreviations_stay() {
        let a = normalize_address("Sec 4, Dwarka");
        assert_eq!(a.tokens(), &set(&["SEC", "4", "DWARKA"]));
    }

    #[test]
    fn non_ascii_letters_are_separators() {
        let n = normalize_name("Ramé Kumar");
        assert_eq!(n.tokens(), ["RAM", "KUMAR"]);
    }

    proptest! {
        #[test]
        fn name_normalization_is_idempotent(text in ".{0,40}") {
            let once = normalize_name(&text);
            let twice = normalize_name(&once.joined());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn address_normalization_is_idempotent(text in "[A-Za-z0-9 ,.\\-]{0,60}") {
            let once = normalize_address(&text);
            let twice = normalize_address(&once.joined());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn tokens_are_clean(text in ".{0,40}") {
            for tok in normalize_name(&text).tokens() {
                prop_assert!(!tok.is_empty());
                prop_assert!(tok.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()));
            }
        }
    }
}
