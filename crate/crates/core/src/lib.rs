//! Exposure modelling for open e-government records.
//!
//! The crate covers the full desk-scale pipeline:
//!
//! * [`synth`] builds a deterministic synthetic population, projects it onto
//!   four government-style sources plus social profiles, and keeps the hidden
//!   [`synth::GroundTruth`] used for evaluation.
//! * [`portal`] answers portal queries over a corpus as HTML, with optional
//!   throttling and a cooperative challenge gate.
//! * [`scrape`] turns portal pages back into typed records.
//! * [`harvest`] runs the enumeration, sweep and chaining strategies against
//!   any [`harvest::Fetcher`] and persists a resumable store.
//! * [`link`] aggregates records into dossiers, family trees and combined
//!   social profiles.
//! * [`score`] computes sensitivity levels, privacy scores, DREAD ratings,
//!   recall, SUS and the corpus report.
//! * [`service`] is the read-only search index behind the JSON API.
//!
//! Batch work goes through [`par::ExecMode`]; with the `parallel` feature
//! (on by default) it fans out on rayon, otherwise everything runs inline.

pub mod domain;
pub mod harvest;
pub mod link;
pub mod par;
pub mod portal;
pub mod scrape;
pub mod score;
pub mod service;
pub mod store;
pub mod synth;

mod jsonl;

pub use domain::{
    Attribute, DlNumber, Gender, LicenceRecord, NormAddress, NormName, PanNumber, PanRecord,
    PhoneRecord, Relation, SocialNetwork, SocialProfile, Source, SourceRecord, VoterRecord,
};
pub use par::ExecMode;
