//! Deterministic synthetic population with per-source projections.
//!
//! Households hold two parents and up to four children (a lone remainder
//! becomes a single-adult household). Every adult is given one of the five
//! presence cases by largest-remainder quota over `case_weights`, so the
//! empirical case mix tracks the weights even when a case is very rare.

mod names;
mod noise;
mod truth;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use chrono::{Datelike, Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    levenshtein, CrossLink, DlNumber, Gender, LicenceRecord, PanNumber, PanRecord, PhoneRecord,
    Relation, SocialNetwork, SocialProfile, Source, ValidityPeriod, VoterRecord, CONSTITUENCIES,
    MIN_VOTER_AGE,
};
use crate::jsonl::{self, JsonlError};
use crate::store::{Store, Stored};

pub use names::LOCALITIES;
pub use noise::perturb_name;
pub use truth::{GroundTruth, KinEdge, KinKind, PersonTruth, PresenceCase, SocialHandle};

/// Ages are computed as of 1 January of this year.
pub const REFERENCE_YEAR: i32 = 2013;
/// RTO codes that issue licences in the synthetic corpus.
pub const LICENCE_RTOS: std::ops::RangeInclusive<u8> = 1..=5;
pub const FIRST_LICENCE_YEAR: i32 = 2008;

pub const TRUTH_FILE: &str = "truth.jsonl";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] JsonlError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub people: usize,
    pub mean_household: f64,
    /// Weights over [`PresenceCase::ALL`]; renormalised before use.
    pub case_weights: [f64; 5],
    pub name_noise_rate: f64,
    pub social_rate: f64,
    pub crosslink_rate: f64,
    /// Probability that a household head is listed in the phone directory.
    pub phone_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            people: 1000,
            mean_household: 3.8,
            case_weights: [0.973, 0.02, 0.01, 0.0007, 0.0002],
            name_noise_rate: 0.05,
            social_rate: 0.3,
            crosslink_rate: 0.4,
            phone_rate: 0.3,
        }
    }
}

impl SynthConfig {
    pub fn new(seed: u64, people: usize) -> Self {
        Self {
            seed,
            people,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidConfig(m));
        if self.case_weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return bad(format!("case weights must be nonnegative: {:?}", self.case_weights));
        }
        if self.case_weights.iter().sum::<f64>() <= 0.0 {
            return bad("case weights sum to zero".into());
        }
        for (name, rate) in [
            ("name_noise_rate", self.name_noise_rate),
            ("social_rate", self.social_rate),
            ("crosslink_rate", self.crosslink_rate),
            ("phone_rate", self.phone_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("{name}={rate} outside [0,1]"));
            }
        }
        if !(2.0..=6.0).contains(&self.mean_household) {
            return bad(format!(
                "mean_household={} outside [2,6] (2 parents + 0..4 children)",
                self.mean_household
            ));
        }
        Ok(())
    }

    pub fn normalized_weights(&self) -> [f64; 5] {
        let total: f64 = self.case_weights.iter().sum();
        self.case_weights.map(|w| w / total)
    }
}

/// The per-source record sets produced by [`synthesize`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub voters: Vec<VoterRecord>,
    pub licences: Vec<LicenceRecord>,
    pub pans: Vec<PanRecord>,
    pub phones: Vec<PhoneRecord>,
    pub social: Vec<SocialProfile>,
}

impl Corpus {
    pub fn is_empty(&self) -> bool {
        self.voters.is_empty()
            && self.licences.is_empty()
            && self.pans.is_empty()
            && self.phones.is_empty()
            && self.social.is_empty()
    }

    /// The corpus as a store without provenance (a "complete harvest").
    pub fn to_store(&self) -> Store {
        Store {
            voters: self.voters.iter().cloned().map(Stored::bare).collect(),
            licences: self.licences.iter().cloned().map(Stored::bare).collect(),
            pans: self.pans.iter().cloned().map(Stored::bare).collect(),
            phones: self.phones.iter().cloned().map(Stored::bare).collect(),
            social: self.social.iter().cloned().map(Stored::bare).collect(),
        }
    }

    pub fn from_store(store: &Store) -> Self {
        Self {
            voters: store.voters.iter().map(|s| s.record.clone()).collect(),
            licences: store.licences.iter().map(|s| s.record.clone()).collect(),
            pans: store.pans.iter().map(|s| s.record.clone()).collect(),
            phones: store.phones.iter().map(|s| s.record.clone()).collect(),
            social: store.social.iter().map(|s| s.record.clone()).collect(),
        }
    }

    fn sort(&mut self) {
        self.voters.sort_by(|a, b| a.voter_id.cmp(&b.voter_id));
        self.licences.sort_by(|a, b| a.dl_number.cmp(&b.dl_number));
        self.pans.sort_by(|a, b| a.pan.cmp(&b.pan));
        self.phones.sort_by(|a, b| a.phone.cmp(&b.phone));
        self.social
            .sort_by(|a, b| (a.network, &a.network_id).cmp(&(b.network, &b.network_id)));
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), JsonlError> {
        jsonl::write(&dir.join(Source::Voter.file_name()), &self.voters)?;
        jsonl::write(&dir.join(Source::Dl.file_name()), &self.licences)?;
        jsonl::write(&dir.join(Source::Pan.file_name()), &self.pans)?;
        jsonl::write(&dir.join(Source::Phone.file_name()), &self.phones)?;
        jsonl::write(&dir.join(Source::Social.file_name()), &self.social)?;
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self, JsonlError> {
        Ok(Self {
            voters: jsonl::read(&dir.join(Source::Voter.file_name()))?,
            licences: jsonl::read(&dir.join(Source::Dl.file_name()))?,
            pans: jsonl::read(&dir.join(Source::Pan.file_name()))?,
            phones: jsonl::read(&dir.join(Source::Phone.file_name()))?,
            social: jsonl::read(&dir.join(Source::Social.file_name()))?,
        })
    }
}

impl GroundTruth {
    pub fn write_dir(&self, dir: &Path) -> Result<(), JsonlError> {
        jsonl::write(&dir.join(TRUTH_FILE), &self.persons)
    }

    pub fn read_dir(dir: &Path) -> Result<Self, JsonlError> {
        Ok(Self {
            persons: jsonl::read(&dir.join(TRUTH_FILE))?,
        })
    }
}

/// Writes corpus and truth files into `dir`.
pub fn write_corpus(dir: &Path, corpus: &Corpus, truth: &GroundTruth) -> Result<(), JsonlError> {
    corpus.write_dir(dir)?;
    truth.write_dir(dir)
}

// ---------------------------------------------------------------------------
// Address rendering. Each source prints the same household in its own style.

#[derive(Debug, Clone)]
struct Address {
    house: u32,
    block: char,
    locality: usize,
    constituency: u8,
}

impl Address {
    fn locality(&self) -> (&'static str, &'static str) {
        LOCALITIES[self.locality]
    }

    fn canonical(&self) -> String {
        let (loc, pin) = self.locality();
        format!("House {}, Block {}, {loc}, New Delhi {pin}", self.house, self.block)
    }

    fn voter_style(&self) -> String {
        let (loc, _) = self.locality();
        let abbreviated: Vec<String> = loc
            .to_ascii_uppercase()
            .split(' ')
            .map(|w| match w {
                "NAGAR" => "NGR".to_string(),
                "ROAD" => "RD".to_string(),
                "STREET" => "ST".to_string(),
                other => other.to_string(),
            })
            .collect();
        format!(
            "H.NO. {}, BLOCK-{}, {}, NEW DELHI",
            self.house,
            self.block,
            abbreviated.join(" ")
        )
    }

    fn licence_style(&self) -> String {
        let (loc, pin) = self.locality();
        format!("House {}, {} Block, {loc}, New Delhi-{pin}", self.house, self.block)
    }

    fn phone_style(&self) -> String {
        let (loc, _) = self.locality();
        format!("{}/{}, {loc}, Delhi", self.house, self.block)
    }
}

fn title_case(given: &str, surname: &str) -> String {
    format!("{given} {surname}")
}

fn upper(name: &str) -> String {
    name.to_ascii_uppercase()
}

// ---------------------------------------------------------------------------

struct Draft {
    person: PersonTruth,
    given: String,
    surname: String,
    relative: Option<(Relation, String)>,
    address: Address,
    married_woman: bool,
}

struct Generator {
    rng: ChaCha8Rng,
    house_counters: Vec<u32>,
    used_voter_ids: HashSet<String>,
    used_pans: HashSet<String>,
    used_phones: HashSet<String>,
    licence_serials: BTreeMap<(u8, u16), u32>,
    social_counter: u64,
}

impl Generator {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            house_counters: vec![0; LOCALITIES.len()],
            used_voter_ids: HashSet::new(),
            used_pans: HashSet::new(),
            used_phones: HashSet::new(),
            licence_serials: BTreeMap::new(),
            social_counter: 0,
        }
    }

    fn pick<'a>(&mut self, list: &'a [&'a str]) -> &'a str {
        list[self.rng.gen_range(0..list.len())]
    }

    /// Picks a given name at edit distance >= 3 from every name in `taken`,
    /// so that household members never satisfy the one-edit name matcher.
    fn distinct_given(&mut self, gender: Gender, taken: &[String]) -> String {
        let list = match gender {
            Gender::M => names::MALE_GIVEN,
            Gender::F => names::FEMALE_GIVEN,
        };
        loop {
            let cand = self.pick(list);
            let cu = cand.to_ascii_uppercase();
            if taken
                .iter()
                .all(|t| levenshtein(&t.to_ascii_uppercase(), &cu) >= 3)
            {
                return cand.to_string();
            }
        }
    }

    fn address(&mut self, constituency: u8) -> Address {
        let locality = (usize::from(constituency) - 1) % LOCALITIES.len();
        self.house_counters[locality] += self.rng.gen_range(1..=7);
        Address {
            house: self.house_counters[locality],
            block: (b'A' + self.rng.gen_range(0..8u8)) as char,
            locality,
            constituency,
        }
    }

    fn dob(&mut self, age: u32) -> NaiveDate {
        let year = REFERENCE_YEAR - 1 - age as i32;
        let start = NaiveDate::from_ymd_opt(year, 1, 1).expect("valid year");
        let days = if NaiveDate::from_ymd_opt(year, 2, 29).is_some() { 366 } else { 365 };
        start + Days::new(self.rng.gen_range(0..days))
    }

    fn voter_id(&mut self) -> String {
        loop {
            let letters: String = (0..3)
                .map(|_| (b'A' + self.rng.gen_range(0..26u8)) as char)
                .collect();
            let id = format!("{letters}{:07}", self.rng.gen_range(0..10_000_000u32));
            if self.used_voter_ids.insert(id.clone()) {
                return id;
            }
        }
    }

    fn pan(&mut self, surname: &str) -> PanNumber {
        let initial = surname
            .chars()
            .next()
            .map(|c| c.to_ascii_uppercase())
            .unwrap_or('X');
        loop {
            let head: String = (0..3)
                .map(|_| (b'A' + self.rng.gen_range(0..26u8)) as char)
                .collect();
            let tail = (b'A' + self.rng.gen_range(0..26u8)) as char;
            let text = format!(
                "{head}P{initial}{:04}{tail}",
                self.rng.gen_range(0..10_000u32)
            );
            if self.used_pans.insert(text.clone()) {
                return PanNumber::parse(&text).expect("generated PAN follows the grammar");
            }
        }
    }

    fn phone(&mut self) -> String {
        loop {
            let p = format!("2{:07}", self.rng.gen_range(0..10_000_000u32));
            if self.used_phones.insert(p.clone()) {
                return p;
            }
        }
    }

    fn licence_number(&mut self, birth_year: i32) -> (DlNumber, NaiveDate) {
        let rto = self.rng.gen_range(LICENCE_RTOS);
        let earliest = (birth_year + MIN_VOTER_AGE as i32).max(FIRST_LICENCE_YEAR);
        let year = self.rng.gen_range(earliest..=REFERENCE_YEAR) as u16;
        let step = self.rng.gen_range(1..=4);
        let serial = self.licence_serials.entry((rto, year)).or_insert(0);
        *serial += step;
        let dl = DlNumber::new(rto, year, *serial).expect("serial within range");
        let issued = NaiveDate::from_ymd_opt(i32::from(year), 1, 1).expect("valid year")
            + Days::new(self.rng.gen_range(0..365));
        (dl, issued)
    }
}

fn children_count(rng: &mut ChaCha8Rng, mean_household: f64) -> usize {
    let p = ((mean_household - 2.0) / 4.0).clamp(0.0, 1.0);
    (0..4).filter(|_| rng.gen_bool(p)).count()
}

fn quota(weights: &[f64; 5], n: usize) -> [usize; 5] {
    let exact: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut counts: [usize; 5] = [0; 5];
    for (c, e) in counts.iter_mut().zip(&exact) {
        *c = e.floor() as usize;
    }
    let mut rest = n - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..5).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for i in order {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    counts
}

/// Generates the corpus and its hidden ground truth.
pub fn synthesize(config: &SynthConfig) -> Result<(Corpus, GroundTruth), SynthError> {
    config.validate()?;
    let mut g = Generator::new(config.seed);
    let mut drafts: Vec<Draft> = Vec::with_capacity(config.people);
    let mut heads: Vec<usize> = Vec::new();
    let mut remaining = config.people;
    let mut household = 0usize;

    while remaining > 0 {
        household += 1;
        let household_id = format!("H{household:06}");
        let constituency = g.rng.gen_range(1..=CONSTITUENCIES);
        let address = g.address(constituency);
        let surname = g.pick(names::SURNAMES).to_string();
        let next_id = |drafts: &Vec<Draft>| format!("P{:06}", drafts.len() + 1);

        if remaining == 1 {
            let gender = if g.rng.gen_bool(0.5) { Gender::M } else { Gender::F };
            let father = g.distinct_given(Gender::M, &[]);
            let given = g.distinct_given(gender, std::slice::from_ref(&father));
            let age = g.rng.gen_range(18..=60);
            let dob = g.dob(age);
            let name = title_case(&given, &surname);
            let relative = title_case(&father, &surname);
            heads.push(drafts.len());
            let person_id = next_id(&drafts);
            drafts.push(Draft {
                person: PersonTruth {
                    person_id,
                    household_id,
                    name,
                    gender,
                    age,
                    dob,
                    address: address.canonical(),
                    constituency,
                    case: None,
                    voter_id: None,
                    dl_number: None,
                    pan: None,
                    phone: None,
                    social: Vec::new(),
                    father_id: None,
                    mother_id: None,
                    spouse_id: None,
                },
                given,
                surname,
                relative: Some((Relation::Father, relative)),
                address,
                married_woman: false,
            });
            remaining = 0;
            continue;
        }

        let mut children = children_count(&mut g.rng, config.mean_household).min(remaining - 2);
        if remaining - 2 - children == 1 {
            if children < 4 {
                children += 1;
            } else {
                children -= 1;
            }
        }
        remaining -= 2 + children;

        let grandfather = g.distinct_given(Gender::M, &[]);
        let mut taken = vec![grandfather.clone()];
        let father_given = g.distinct_given(Gender::M, &taken);
        taken.push(father_given.clone());
        let mother_given = g.distinct_given(Gender::F, &taken);
        taken.push(mother_given.clone());

        let father_age: u32 = if children > 0 {
            g.rng.gen_range(36..=80)
        } else {
            g.rng.gen_range(22..=80)
        };
        let mother_age = father_age.saturating_sub(g.rng.gen_range(0..=6)).max(20);
        let parent_min = father_age.min(mother_age);

        let father_idx = drafts.len();
        let mother_idx = father_idx + 1;
        let father_id = format!("P{:06}", father_idx + 1);
        let mother_id = format!("P{:06}", mother_idx + 1);
        let father_name = title_case(&father_given, &surname);
        heads.push(father_idx);

        for (given, gender, age, relative, spouse, married) in [
            (
                father_given.clone(),
                Gender::M,
                father_age,
                (Relation::Father, title_case(&grandfather, &surname)),
                mother_id.clone(),
                false,
            ),
            (
                mother_given.clone(),
                Gender::F,
                mother_age,
                (Relation::Husband, father_name.clone()),
                father_id.clone(),
                true,
            ),
        ] {
            let dob = g.dob(age);
            let person_id = next_id(&drafts);
            drafts.push(Draft {
                person: PersonTruth {
                    person_id,
                    household_id: household_id.clone(),
                    name: title_case(&given, &surname),
                    gender,
                    age,
                    dob,
                    address: address.canonical(),
                    constituency,
                    case: None,
                    voter_id: None,
                    dl_number: None,
                    pan: None,
                    phone: None,
                    social: Vec::new(),
                    father_id: None,
                    mother_id: None,
                    spouse_id: Some(spouse),
                },
                given,
                surname: surname.clone(),
                relative: Some(relative),
                address: address.clone(),
                married_woman: married,
            });
        }

        for _ in 0..children {
            let gender = if g.rng.gen_bool(0.5) { Gender::M } else { Gender::F };
            let given = g.distinct_given(gender, &taken);
            taken.push(given.clone());
            // parents are at least 18 years older than any child
            let age = g.rng.gen_range(0..=parent_min - 18);
            let dob = g.dob(age);
            let person_id = next_id(&drafts);
            drafts.push(Draft {
                person: PersonTruth {
                    person_id,
                    household_id: household_id.clone(),
                    name: title_case(&given, &surname),
                    gender,
                    age,
                    dob,
                    address: address.canonical(),
                    constituency,
                    case: None,
                    voter_id: None,
                    dl_number: None,
                    pan: None,
                    phone: None,
                    social: Vec::new(),
                    father_id: Some(father_id.clone()),
                    mother_id: Some(mother_id.clone()),
                    spouse_id: None,
                },
                given,
                surname: surname.clone(),
                relative: Some((Relation::Father, father_name.clone())),
                address: address.clone(),
                married_woman: false,
            });
        }
    }

    // Presence cases by quota over adults, in a seeded random order.
    let mut adults: Vec<usize> = (0..drafts.len())
        .filter(|&i| drafts[i].person.age >= MIN_VOTER_AGE)
        .collect();
    adults.shuffle(&mut g.rng);
    let counts = quota(&config.normalized_weights(), adults.len());
    let mut cursor = 0;
    for (case, n) in PresenceCase::ALL.into_iter().zip(counts) {
        for &i in &adults[cursor..cursor + n] {
            drafts[i].person.case = Some(case);
        }
        cursor += n;
    }

    let mut corpus = Corpus::default();
    // record index per person: (source, position) for later noise injection
    let mut owned: Vec<Vec<(Source, usize)>> = vec![Vec::new(); drafts.len()];

    for (i, d) in drafts.iter_mut().enumerate() {
        let Some(case) = d.person.case else { continue };
        let canonical = title_case(&d.given, &d.surname);
        let (relation, relative_name) = d.relative.clone().unwrap_or((Relation::Father, String::new()));
        let relation = if d.married_woman { Relation::Husband } else { relation };
        if case.has_voter() {
            let voter_id = g.voter_id();
            d.person.voter_id = Some(voter_id.clone());
            owned[i].push((Source::Voter, corpus.voters.len()));
            corpus.voters.push(VoterRecord {
                voter_id,
                name: upper(&canonical),
                relative_name: upper(relative_name.trim()),
                relation,
                age: d.person.age,
                gender: d.person.gender,
                address: d.address.voter_style(),
                constituency: d.address.constituency,
            });
        }
        if case.has_dl() {
            let (dl_number, issued) = g.licence_number(d.person.dob.year());
            let until = issued
                .with_year(issued.year() + 20)
                .unwrap_or_else(|| issued + Days::new(365 * 20))
                - Days::new(1);
            d.person.dl_number = Some(dl_number);
            owned[i].push((Source::Dl, corpus.licences.len()));
            let category = g.pick(names::VEHICLE_CLASSES).to_string();
            corpus.licences.push(LicenceRecord {
                dl_number,
                name: canonical.clone(),
                address: d.address.licence_style(),
                relative_name: relative_name.trim().to_string(),
                dob: d.person.dob,
                validity_period: ValidityPeriod {
                    from: issued,
                    until,
                },
                vehicle_category: category,
            });
        }
        if case.has_pan() {
            let pan = g.pan(&d.surname);
            d.person.pan = Some(pan.clone());
            owned[i].push((Source::Pan, corpus.pans.len()));
            corpus.pans.push(PanRecord {
                pan,
                name: upper(&canonical),
                dob: d.person.dob,
            });
        }
    }

    for &h in &heads {
        if drafts[h].person.age < MIN_VOTER_AGE || !g.rng.gen_bool(config.phone_rate) {
            continue;
        }
        let phone = g.phone();
        drafts[h].person.phone = Some(phone.clone());
        owned[h].push((Source::Phone, corpus.phones.len()));
        corpus.phones.push(PhoneRecord {
            name: title_case(&drafts[h].given, &drafts[h].surname),
            address: drafts[h].address.phone_style(),
            phone,
        });
    }

    for d in drafts.iter_mut() {
        if d.person.age < MIN_VOTER_AGE || !g.rng.gen_bool(config.social_rate) {
            continue;
        }
        let mut networks: Vec<SocialNetwork> = SocialNetwork::ALL
            .into_iter()
            .filter(|_| g.rng.gen_bool(0.5))
            .collect();
        if networks.is_empty() {
            networks.push(SocialNetwork::ALL[g.rng.gen_range(0..5)]);
        }
        let display = title_case(&d.given, &d.surname);
        let (locality, _) = d.address.locality();
        let mut made: Vec<SocialProfile> = Vec::new();
        for net in networks {
            g.social_counter += 1;
            let n = g.social_counter;
            let handle = format!(
                "{}{}{n}",
                d.given.to_ascii_lowercase(),
                d.surname.to_ascii_lowercase()
            );
            let location = match net {
                SocialNetwork::Facebook => None,
                SocialNetwork::Twitter if g.rng.gen_bool(0.6) => Some(if g.rng.gen_bool(0.5) {
                    "New Delhi".to_string()
                } else {
                    format!("{locality}, Delhi")
                }),
                SocialNetwork::Foursquare if g.rng.gen_bool(0.7) => Some("New Delhi".to_string()),
                SocialNetwork::Googleplus if g.rng.gen_bool(0.5) => Some(format!("{locality}, New Delhi")),
                SocialNetwork::Linkedin if g.rng.gen_bool(0.5) => Some("Delhi, India".to_string()),
                _ => None,
            };
            made.push(SocialProfile {
                network: net,
                network_id: format!("{}", 10_000_000 + n),
                display_name: display.clone(),
                handle: handle.clone(),
                location,
                profile_url: format!("https://social.example/{net}/{handle}"),
                cross_links: Vec::new(),
            });
        }
        let links: Vec<CrossLink> = made
            .iter()
            .filter(|p| matches!(p.network, SocialNetwork::Facebook | SocialNetwork::Twitter))
            .map(|p| CrossLink {
                network: p.network,
                handle: p.handle.clone(),
            })
            .collect();
        let has_4sq = made.iter().any(|p| p.network == SocialNetwork::Foursquare);
        if has_4sq && !links.is_empty() && g.rng.gen_bool(config.crosslink_rate) {
            for p in made.iter_mut().filter(|p| p.network == SocialNetwork::Foursquare) {
                p.cross_links = links.clone();
            }
        }
        for p in made {
            d.person.social.push(SocialHandle {
                network: p.network,
                network_id: p.network_id.clone(),
                handle: p.handle.clone(),
            });
            corpus.social.push(p);
        }
    }

    // One misspelling in exactly one of the person's name-bearing records.
    for (i, records) in owned.iter().enumerate() {
        if records.is_empty() || !g.rng.gen_bool(config.name_noise_rate) {
            continue;
        }
        let (source, pos) = records[g.rng.gen_range(0..records.len())];
        let name = match source {
            Source::Voter => &mut corpus.voters[pos].name,
            Source::Dl => &mut corpus.licences[pos].name,
            Source::Pan => &mut corpus.pans[pos].name,
            Source::Phone => &mut corpus.phones[pos].name,
            Source::Social => continue,
        };
        if let Some(noisy) = perturb_name(name, &mut g.rng) {
            *name = noisy;
        }
        let _ = i;
    }

    corpus.sort();
    let truth = GroundTruth {
        persons: drafts.into_iter().map(|d| d.person).collect(),
    };
    Ok((corpus, truth))
}
