//! End-to-end acceptance run. Every criterion prints exactly one line:
//!
//! ```text
//! PASS  <name>  (<seconds>s)  <detail>
//! FAIL  <name>  (<seconds>s)  <reason>
//! ```
//!
//! Criteria run on separate threads because the throttled harvest spends most
//! of its time waiting; the lines are printed in a fixed order afterwards.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use mosaic_core::domain::{
    address_match_with, name_match, normalize_address, normalize_name, Attribute, Gender,
    NormName, Relation, SourceRecord, VoterRecord,
};
use mosaic_core::harvest::{harvest_all, HarvestError, HarvestPlan, LocalPortal};
use mosaic_core::link::{build_family_tree, build_family_trees, link_cross_db, pairwise_quality, LinkConfig, Linked};
use mosaic_core::portal::{
    render_dl_page, render_pan_page, render_phone_page, render_voter_page, Portal, PortalConfig,
};
use mosaic_core::scrape::{parse_dl_page, parse_pan_page, parse_phone_page, parse_voter_page};
use mosaic_core::score::{
    build_sensitivity_table, corpus_report, dread_score, level_from_percentage, privacy_score,
    raw_record_score, recall, sus_score, DreadBand, ScoreParams, SensitivityTable, SusResponse,
};
use mosaic_core::service::SearchIndex;
use mosaic_core::store::Store;
use mosaic_core::synth::{synthesize, Corpus, GroundTruth, SynthConfig};
use mosaic_core::{ExecMode, LicenceRecord, PanRecord, PhoneRecord};
use mosaic_net::{serve_portal, HttpFetcher};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    ensure!(took <= limit, "{what} took {:.1}s, limit {:.0}s", took.as_secs_f64(), limit.as_secs_f64());
    Ok(())
}

// Table 5.2 rows: attribute, percent unwilling to share, printed level.
const TABLE: [(Attribute, f64, u8); 9] = [
    (Attribute::VoterId, 56.4, 4),
    (Attribute::DlNumber, 58.0, 4),
    (Attribute::PanNumber, 67.7, 5),
    (Attribute::FullName, 14.5, 1),
    (Attribute::Address, 82.2, 5),
    (Attribute::Age, 29.0, 2),
    (Attribute::Dob, 50.0, 3),
    (Attribute::RelativeName, 38.7, 3),
    (Attribute::Gender, 14.5, 1),
];

fn table() -> SensitivityTable {
    build_sensitivity_table(&TABLE.map(|(a, p, _)| (a, p))).unwrap()
}

fn score_case_one() -> Outcome {
    let started = Instant::now();
    let v = VoterRecord {
        voter_id: "DL/04/021/000117".into(),
        name: "AMIT KUMAR".into(),
        relative_name: "SURESH KUMAR".into(),
        relation: Relation::Father,
        age: 31,
        gender: Gender::M,
        address: "H.NO. 7, BLOCK-A, ROHINI, NEW DELHI".into(),
        constituency: 4,
    };
    let dossier = mosaic_core::link::Dossier::from_records(vec![SourceRecord::Voter(v)], Vec::new());
    let s = privacy_score(&dossier, &table(), &ScoreParams::default()).map_err(|e| e.to_string())?;
    ensure!(s.value == 16.0, "voter-only dossier scored {}", s.value);
    within(Duration::from_secs(1), started, "scoring")?;
    Ok("voter-only dossier = 16".into())
}

fn sensitivity_calibration() -> Outcome {
    let t = table();
    for (a, p, level) in TABLE {
        ensure!(t.level(a) == Some(level), "{a} ({p}%) got {:?}, printed {level}", t.level(a));
    }
    Ok("9/9 printed levels reproduced".into())
}

fn dread() -> Outcome {
    let d = dread_score([2, 3, 2, 3, 3]).map_err(|e| e.to_string())?;
    ensure!(d.total == 13 && d.band == DreadBand::High, "got {} {:?}", d.total, d.band);
    Ok("(2,3,2,3,3) = 13 high".into())
}

fn sus() -> Outcome {
    let one = |items: [u8; 10]| sus_score(&[SusResponse::new(&items).unwrap()]).unwrap();
    let neutral = one([3; 10]);
    let best = one([5, 1, 5, 1, 5, 1, 5, 1, 5, 1]);
    let worst = one([1, 5, 1, 5, 1, 5, 1, 5, 1, 5]);
    ensure!((neutral, best, worst) == (50.0, 100.0, 0.0), "got {neutral}/{best}/{worst}");
    Ok("neutral 50.0, max 100.0, min 0.0".into())
}

/// The arithmetic check plus the budget-capped desk substitute.
fn recall_criterion() -> Outcome {
    let r = recall(179, 389).map_err(|e| e.to_string())?;
    ensure!((r - 46.0).abs() <= 0.05, "recall(179, 389) = {r}");

    let (corpus, truth) = synthesize(&SynthConfig::new(46, 1000)).unwrap();
    let portal = Arc::new(Portal::new(&corpus, PortalConfig::default()).unwrap());
    let fetcher = LocalPortal::new(portal);
    let full_plan = HarvestPlan {
        dl_seeds: Vec::new(),
        chain_pan: false,
        phone_letters: Vec::new(),
        politeness_delay_ms: 0,
        ..HarvestPlan::default()
    };
    let root_queries = (full_plan.voter_letters.len() * full_plan.constituencies.len()) as u64;
    let plan = HarvestPlan {
        request_budget: Some(root_queries / 2),
        ..full_plan
    };
    let dir = tempfile::tempdir().unwrap();
    match harvest_all(&fetcher, &plan, dir.path()) {
        Ok(_) | Err(HarvestError::BudgetExhausted(_)) => {}
        Err(e) => return Err(e.to_string()),
    }
    let store = Store::load(dir.path()).unwrap();
    let coverage = store.voters.len() as f64 / corpus.voters.len() as f64;

    let linked = Linked::build(&store, &LinkConfig::default());
    let index = SearchIndex::build(&store, linked, &table(), &ScoreParams::default(), ExecMode::Parallel)
        .map_err(|e| e.to_string())?;
    let mut people: Vec<_> = truth.persons.iter().filter(|p| p.voter_id.is_some()).collect();
    people.shuffle(&mut ChaCha8Rng::seed_from_u64(389));
    let mut identified = 0u64;
    for p in people.iter().take(100) {
        let want = p.voter_id.as_deref().unwrap();
        let hits = index.search(&p.name, None, 1).map_err(|e| e.to_string())?;
        let total = hits.groups["voter"].total;
        let found = (1..=total.div_ceil(50).max(1)).any(|page| {
            index.search(&p.name, None, page).unwrap().groups["voter"]
                .items
                .iter()
                .any(|i| matches!(&i.record, SourceRecord::Voter(v) if v.voter_id == want))
        });
        identified += u64::from(found);
    }
    let measured = recall(identified, 100).unwrap();
    let gap = (measured - 100.0 * coverage).abs();
    ensure!(
        gap <= 10.0,
        "measured recall {measured}% vs coverage {:.1}% (gap {gap:.1} pp)",
        100.0 * coverage
    );
    Ok(format!(
        "recall(179,389) = {r}; desk recall {measured}% vs harvested coverage {:.1}%",
        100.0 * coverage
    ))
}

fn round_trip() -> Outcome {
    let config = SynthConfig {
        case_weights: [0.0, 0.0, 0.0, 0.0, 1.0],
        phone_rate: 1.0,
        ..SynthConfig::new(1000, 4000)
    };
    let (corpus, _) = synthesize(&config).unwrap();
    let n = 1000;
    let started = Instant::now();
    ensure!(
        corpus.voters.len() >= n && corpus.licences.len() >= n && corpus.pans.len() >= n && corpus.phones.len() >= n,
        "corpus too small: {} / {} / {} / {}",
        corpus.voters.len(),
        corpus.licences.len(),
        corpus.pans.len(),
        corpus.phones.len()
    );
    let mut failures = 0usize;
    for v in &corpus.voters[..n] {
        let page = render_voter_page(std::slice::from_ref(v), false);
        failures += usize::from(parse_voter_page(&page).ok().as_deref() != Some(std::slice::from_ref(v)));
    }
    for l in &corpus.licences[..n] {
        let back: Option<LicenceRecord> = parse_dl_page(&render_dl_page(Some(l))).ok().flatten();
        failures += usize::from(back.as_ref() != Some(l));
    }
    for p in &corpus.pans[..n] {
        let back: Option<PanRecord> = parse_pan_page(&render_pan_page(Some(p))).ok().flatten();
        failures += usize::from(back.as_ref() != Some(p));
    }
    for p in &corpus.phones[..n] {
        let back: Vec<PhoneRecord> = parse_phone_page(&render_phone_page(std::slice::from_ref(p), false)).unwrap_or_default();
        failures += usize::from(back.as_slice() != std::slice::from_ref(p));
    }
    // multi-row pages as well
    let page = render_voter_page(&corpus.voters[..n], false);
    failures += usize::from(parse_voter_page(&page).ok().as_deref() != Some(&corpus.voters[..n]));
    ensure!(failures == 0, "{failures} records did not survive render and parse");
    within(Duration::from_secs(10), started, "round trip")?;
    Ok(format!("4 x {n} records field-exact, 0 failures"))
}

/// Records the default plan can reach, computed straight from the corpus.
fn reachable(corpus: &Corpus, plan: &HarvestPlan) -> Corpus {
    let mut dl_numbers = BTreeSet::new();
    for seed in &plan.dl_seeds {
        for k in 0..=plan.dl_span {
            dl_numbers.insert((seed.rto(), seed.year(), seed.serial() + k));
        }
    }
    let licences: Vec<LicenceRecord> = corpus
        .licences
        .iter()
        .filter(|l| dl_numbers.contains(&(l.dl_number.rto(), l.dl_number.year(), l.dl_number.serial())))
        .cloned()
        .collect();
    let key = |name: &str, dob| {
        let n = normalize_name(name);
        Some((n.first()?.to_string(), n.last()?.to_string(), dob))
    };
    let wanted: BTreeSet<_> = licences.iter().filter_map(|l| key(&l.name, l.dob)).collect();
    let mut pans_by_key: BTreeMap<_, &PanRecord> = BTreeMap::new();
    for p in &corpus.pans {
        if let Some(k) = key(&p.name, p.dob).filter(|k| wanted.contains(k)) {
            let slot = pans_by_key.entry(k).or_insert(p);
            if p.pan < slot.pan {
                *slot = p;
            }
        }
    }
    let starts_with_letter = |name: &str, letters: &[char]| {
        name.trim_start()
            .chars()
            .next()
            .is_some_and(|c| letters.iter().any(|l| l.eq_ignore_ascii_case(&c)))
    };
    Corpus {
        voters: corpus
            .voters
            .iter()
            .filter(|v| plan.constituencies.contains(&v.constituency) && starts_with_letter(&v.name, &plan.voter_letters))
            .cloned()
            .collect(),
        licences,
        pans: if plan.chain_pan { pans_by_key.into_values().cloned().collect() } else { Vec::new() },
        phones: corpus
            .phones
            .iter()
            .filter(|p| starts_with_letter(&p.name, &plan.phone_letters))
            .cloned()
            .collect(),
        social: Vec::new(),
    }
}

fn sorted(mut c: Corpus) -> Corpus {
    c.voters.sort_by(|a, b| a.voter_id.cmp(&b.voter_id));
    c.licences.sort_by_key(|l| l.dl_number);
    c.pans.sort_by(|a, b| a.pan.cmp(&b.pan));
    c.phones.sort_by(|a, b| a.phone.cmp(&b.phone));
    c.social.clear();
    c
}

fn harvest_completeness() -> Outcome {
    let started = Instant::now();
    let (corpus, _) = synthesize(&SynthConfig::new(7, 1000)).unwrap();
    let plan = HarvestPlan::default();
    let oracle = sorted(reachable(&corpus, &plan));

    let run = |rate: f64, captcha: bool| -> Result<(Corpus, mosaic_core::harvest::HarvestStats), String> {
        let config = PortalConfig {
            rate_limit: rate,
            captcha_required: captcha,
            ..PortalConfig::default()
        };
        let portal = Arc::new(Portal::new(&corpus, config).map_err(|e| e.to_string())?);
        let server = serve_portal(portal, "127.0.0.1:0".parse().unwrap()).map_err(|e| e.to_string())?;
        let dir = tempfile::tempdir().unwrap();
        let stats = harvest_all(&HttpFetcher::new(&server.url()), &plan, dir.path()).map_err(|e| e.to_string())?;
        server.shutdown();
        let store = Store::load(dir.path()).map_err(|e| e.to_string())?;
        Ok((sorted(Corpus::from_store(&store)), stats))
    };
    let (gated, open) = thread::scope(|s| {
        let gated = s.spawn(|| {
            let out = run(20.0, true);
            (out, started.elapsed().as_secs_f64())
        });
        let open = s.spawn(|| run(0.0, false));
        (gated.join().expect("gated harvest"), open.join().expect("open harvest"))
    });
    let ((gated, gated_stats), gated_secs) = (gated.0?, gated.1);
    let (open, _) = open?;

    let diff = |name: &str, got: usize, want: usize| format!("{name} {got}/{want}");
    ensure!(
        gated == oracle,
        "gated harvest differs from oracle: {}, {}, {}, {}",
        diff("voters", gated.voters.len(), oracle.voters.len()),
        diff("dl", gated.licences.len(), oracle.licences.len()),
        diff("pan", gated.pans.len(), oracle.pans.len()),
        diff("phone", gated.phones.len(), oracle.phones.len())
    );
    ensure!(open == gated, "open and gated harvests differ");
    ensure!(gated_stats.captcha_solves > 0, "captcha gate never exercised");
    within(Duration::from_secs(120), started, "harvest")?;
    Ok(format!(
        "{} voters, {} dl, {} pan, {} phone; gated run {:.0}s with {} throttles and {} challenges",
        oracle.voters.len(),
        oracle.licences.len(),
        oracle.pans.len(),
        oracle.phones.len(),
        gated_secs,
        gated_stats.throttle_events,
        gated_stats.captcha_solves
    ))
}

fn linkage_quality() -> Outcome {
    let started = Instant::now();
    let (corpus, truth) = synthesize(&SynthConfig::new(10_000, 10_000)).unwrap();
    let dossiers = link_cross_db(&corpus.to_store(), &LinkConfig::default());
    let q = pairwise_quality(&dossiers, &truth.owners());
    ensure!(q.precision >= 0.95, "precision {:.4} < 0.95 ({q:?})", q.precision);
    ensure!(q.recall >= 0.80, "recall {:.4} < 0.80 ({q:?})", q.recall);

    let clean = SynthConfig {
        name_noise_rate: 0.0,
        ..SynthConfig::new(10_001, 10_000)
    };
    let (corpus0, truth0) = synthesize(&clean).unwrap();
    let q0 = pairwise_quality(&link_cross_db(&corpus0.to_store(), &LinkConfig::default()), &truth0.owners());
    ensure!(q0.precision == 1.0, "noiseless precision {}", q0.precision);
    within(Duration::from_secs(120), started, "linkage")?;
    Ok(format!(
        "precision {:.3}, recall {:.3} over {} true pairs; noiseless precision {:.1}",
        q.precision, q.recall, q.true_pairs, q0.precision
    ))
}

// Exhaustive kin scan over every voter pair, written from the rules alone.
struct OracleTree {
    father: Option<String>,
    mother: Option<String>,
    spouse: Option<String>,
    siblings: BTreeSet<String>,
}

fn oracle_tree(voters: &[VoterRecord], ego: &VoterRecord) -> OracleTree {
    let nm = |a: &NormName, b: &NormName| !a.is_empty() && name_match(a, b);
    let ego_name = normalize_name(&ego.name);
    let ego_rel = normalize_name(&ego.relative_name);
    let ego_addr = normalize_address(&ego.address);
    let mut housemates = Vec::new();
    for v in voters {
        if v.voter_id == ego.voter_id || v.constituency != ego.constituency {
            continue;
        }
        if address_match_with(&normalize_address(&v.address), &ego_addr, 0.8).matched {
            housemates.push((v, normalize_name(&v.name), normalize_name(&v.relative_name)));
        }
    }
    let pick = |pred: &dyn Fn(&VoterRecord, &NormName, &NormName) -> bool| -> Option<String> {
        let mut best: Option<(u32, &str)> = None;
        for (v, n, r) in &housemates {
            if pred(v, n, r) {
                let cand = (v.age.abs_diff(ego.age), v.voter_id.as_str());
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        best.map(|(_, id)| id.to_string())
    };
    let older = |v: &VoterRecord| v.age >= ego.age + 16;
    let mut t = OracleTree {
        father: None,
        mother: None,
        spouse: None,
        siblings: BTreeSet::new(),
    };
    match ego.relation {
        Relation::Father => {
            t.father = pick(&|v, n, _| nm(n, &ego_rel) && older(v));
            t.mother = pick(&|v, _, r| v.gender == Gender::F && v.relation == Relation::Husband && nm(r, &ego_rel));
        }
        Relation::Mother => {
            t.mother = pick(&|v, n, _| v.gender == Gender::F && nm(n, &ego_rel) && older(v));
        }
        Relation::Husband => {}
    }
    if ego.relation != Relation::Husband {
        for (v, _, r) in &housemates {
            if v.relation == ego.relation && nm(r, &ego_rel) {
                t.siblings.insert(v.voter_id.clone());
            }
        }
    }
    t.spouse = if ego.relation == Relation::Husband {
        pick(&|_, n, _| nm(n, &ego_rel))
    } else {
        pick(&|v, _, r| v.relation == Relation::Husband && nm(r, &ego_name))
    };
    t
}

fn family_tree() -> Outcome {
    let (corpus, truth) = synthesize(&SynthConfig::new(1001, 1000)).unwrap();
    let trees = build_family_trees(&corpus.voters, ExecMode::Parallel);
    let mut disagreements = Vec::new();
    for (v, t) in corpus.voters.iter().zip(&trees) {
        let o = oracle_tree(&corpus.voters, v);
        let same = t.father == o.father && t.mother == o.mother && t.spouse == o.spouse && t.siblings == o.siblings;
        if !same || build_family_tree(&corpus.voters, v) != *t {
            disagreements.push(v.voter_id.clone());
        }
    }
    ensure!(
        disagreements.is_empty(),
        "{} of {} egos disagree, first {:?}",
        disagreements.len(),
        trees.len(),
        disagreements.first()
    );
    let by_ego: HashMap<&str, &BTreeSet<String>> = trees.iter().map(|t| (t.ego.as_str(), &t.siblings)).collect();
    for t in &trees {
        for s in &t.siblings {
            ensure!(by_ego[s.as_str()].contains(&t.ego), "sibling link {} -> {s} is one-way", t.ego);
        }
    }
    let fathers = truth_father_agreement(&truth, &trees);
    Ok(format!(
        "{} egos agree with the exhaustive scan, siblings symmetric; father slot matches truth for {fathers}",
        trees.len()
    ))
}

fn truth_father_agreement(truth: &GroundTruth, trees: &[mosaic_core::link::FamilyTree]) -> String {
    let voter_of: HashMap<&str, &str> = truth
        .persons
        .iter()
        .filter_map(|p| Some((p.person_id.as_str(), p.voter_id.as_deref()?)))
        .collect();
    let person_of: HashMap<&str, &mosaic_core::synth::PersonTruth> = truth
        .persons
        .iter()
        .filter_map(|p| Some((p.voter_id.as_deref()?, p)))
        .collect();
    let (mut hit, mut total) = (0, 0);
    for t in trees {
        let Some(p) = person_of.get(t.ego.as_str()) else { continue };
        let Some(father) = p.father_id.as_deref().and_then(|f| voter_of.get(f)) else { continue };
        total += 1;
        hit += usize::from(t.father.as_deref() == Some(*father));
    }
    format!("{hit}/{total} egos whose father is on the roll")
}

fn property_suite() -> Outcome {
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestRunner};

    let t = table();
    let p = ScoreParams::default();
    let mut runner = TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(512)
    });
    let attrs = proptest::sample::subsequence(Attribute::ALL.to_vec(), 0..=Attribute::ALL.len());
    runner
        .run(&(attrs.clone(), attrs), |(a, b)| {
            let a: BTreeSet<_> = a.into_iter().collect();
            let union: BTreeSet<_> = a.iter().copied().chain(b).collect();
            prop_assert!(raw_record_score(&a, &t, &p).unwrap() <= raw_record_score(&union, &t, &p).unwrap());
            Ok(())
        })
        .map_err(|e| format!("monotonicity: {e}"))?;
    runner
        .run(&(0.0f64..=100.0, 0.0f64..=100.0), |(x, y)| {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            prop_assert!(level_from_percentage(lo).unwrap() <= level_from_percentage(hi).unwrap());
            Ok(())
        })
        .map_err(|e| format!("level monotonicity: {e}"))?;

    let (corpus, _) = synthesize(&SynthConfig::new(77, 3000)).unwrap();
    let base = corpus.to_store();
    let dossiers = link_cross_db(&base, &LinkConfig::default());
    for d in dossiers.iter().take(300) {
        let mut doubled = d.clone();
        doubled.voters.extend(d.voters.clone());
        doubled.licences.extend(d.licences.clone());
        doubled.pans.extend(d.pans.clone());
        doubled.phones.extend(d.phones.clone());
        ensure!(
            privacy_score(&doubled, &t, &p).unwrap() == privacy_score(d, &t, &p).unwrap(),
            "duplicate records changed the score of {}",
            d.dossier_id
        );
    }

    let partition = |ds: &[mosaic_core::link::Dossier]| -> Vec<Vec<String>> { ds.iter().map(|d| d.member_keys()).collect() };
    let expected = partition(&dossiers);
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = base.clone();
        s.voters.shuffle(&mut rng);
        s.licences.shuffle(&mut rng);
        s.pans.shuffle(&mut rng);
        s.phones.shuffle(&mut rng);
        ensure!(
            partition(&link_cross_db(&s, &LinkConfig::default())) == expected,
            "linkage changed under shuffle seed {seed}"
        );
    }

    let (small, _) = synthesize(&SynthConfig::new(78, 400)).unwrap();
    let fetcher = LocalPortal::new(Arc::new(Portal::new(&small, PortalConfig::default()).unwrap()));
    let plan = HarvestPlan {
        politeness_delay_ms: 0,
        dl_span: 60,
        ..HarvestPlan::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let first = harvest_all(&fetcher, &plan, dir.path()).map_err(|e| e.to_string())?;
    let before = Store::load(dir.path()).unwrap();
    let second = harvest_all(&fetcher, &plan, dir.path()).map_err(|e| e.to_string())?;
    ensure!(second.total_queries() == 0, "rerun issued {} queries", second.total_queries());
    ensure!(Store::load(dir.path()).unwrap() == before, "rerun changed the store");
    Ok(format!(
        "monotonicity, duplicates, level order, 5 shuffles, resume ({} queries then 0)",
        first.total_queries()
    ))
}

fn report_structure() -> Outcome {
    let config = SynthConfig {
        case_weights: [0.9, 0.04, 0.02, 0.02, 0.02],
        ..SynthConfig::new(1693, 4000)
    };
    let (corpus, _) = synthesize(&config).unwrap();
    let store = corpus.to_store();
    let linked = Linked::build(&store, &LinkConfig::default());
    let report = corpus_report(&store, &linked, &table(), &ScoreParams::default(), ExecMode::Parallel)
        .map_err(|e| e.to_string())?;
    let spanning: Vec<&str> = linked
        .dossiers
        .iter()
        .filter(|d| !d.voters.is_empty() && !d.licences.is_empty() && !d.pans.is_empty())
        .map(|d| d.dossier_id.as_str())
        .collect();
    ensure!(!spanning.is_empty(), "no dossier spans all three databases");
    ensure!(
        report.max_score_dossiers == spanning,
        "{} max-score dossiers, {} spanning all three",
        report.max_score_count,
        spanning.len()
    );
    Ok(format!(
        "{} dossiers at the maximum score {} and all span voter+DL+PAN",
        report.max_score_count, report.max_score
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("score oracle, case 1", score_case_one),
        ("sensitivity calibration", sensitivity_calibration),
        ("DREAD", dread),
        ("recall", recall_criterion),
        ("SUS", sus),
        ("render/parse round trip", round_trip),
        ("harvest completeness", harvest_completeness),
        ("linkage quality", linkage_quality),
        ("family tree", family_tree),
        ("property suite", property_suite),
        ("report structure", report_structure),
    ];
    panic::set_hook(Box::new(|_| {}));
    let handles: Vec<_> = criteria
        .into_iter()
        .map(|(name, f)| {
            let h = thread::spawn(move || {
                let started = Instant::now();
                let out = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
                    let msg = e
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panicked".into());
                    Err(format!("panic: {msg}"))
                });
                (out, started.elapsed())
            });
            (name, h)
        })
        .collect();
    let total = handles.len();
    let mut failed = 0;
    for (name, h) in handles {
        let (out, took) = h.join().expect("criterion thread");
        match out {
            Ok(detail) => println!("PASS  {name}  ({:.1}s)  {detail}", took.as_secs_f64()),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}  ({:.1}s)  {reason}", took.as_secs_f64());
            }
        }
    }
    println!("{total} criteria, {failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

