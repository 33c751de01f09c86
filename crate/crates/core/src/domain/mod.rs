//! Record types, identifier grammars and the matching primitives shared by
//! every other module.

mod ids;
mod matching;
mod normalize;
mod records;

pub use ids::{DlNumber, DlNumberError, PanNumber, PanNumberError, DL_STATE};
pub use matching::{
    address_match, address_match_with, levenshtein, name_distance, name_match, AddressMatch,
    DEFAULT_ADDRESS_THRESHOLD,
};
pub use normalize::{normalize_address, normalize_name, NormAddress, NormName};
pub use records::{
    Attribute, CrossLink, Gender, LicenceRecord, PanRecord, PhoneRecord, RecordError, Relation,
    SocialNetwork, SocialProfile, Source, SourceRecord, ValidityPeriod, VoterRecord,
    CONSTITUENCIES, MIN_VOTER_AGE,
};
