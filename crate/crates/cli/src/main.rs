use std::io::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mosaic_core::domain::DlNumber;
use mosaic_core::harvest::{harvest_all, HarvestError, HarvestPlan};
use mosaic_core::link::{LinkConfig, Linked};
use mosaic_core::portal::{Portal, PortalConfig, DEFAULT_ROW_CAP};
use mosaic_core::score::{
    corpus_report, dread_score, privacy_score, read_sus_csv, render_report_text, sus_score, ScoreMode,
    ScoreParams, SensitivityTable, REPORT_FILE,
};
use mosaic_core::service::SearchIndex;
use mosaic_core::store::Store;
use mosaic_core::synth::{synthesize, write_corpus, Corpus, SynthConfig};
use mosaic_core::ExecMode;
use mosaic_net::{serve_api, serve_portal, HttpFetcher};
use serde::Serialize;

const SCORES_FILE: &str = "scores.jsonl";

#[derive(Parser)]
#[command(name = "mosaic", version, about = "Synthesize, serve, harvest, link and score open e-government records")]
struct Cli {
    /// Run batch stages on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus with its ground truth.
    Synth {
        #[arg(long)]
        people: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        noise: Option<f64>,
    },
    /// Serve a corpus through the simulated portals until interrupted.
    Portal {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
        #[arg(long)]
        captcha: bool,
        #[arg(long, default_value_t = 0)]
        latency: u64,
        #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
        row_cap: usize,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
    },
    /// Harvest a running portal into a store directory.
    Harvest(HarvestArgs),
    /// Build dossiers, family trees and combined social profiles.
    Link {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        address_threshold: Option<f64>,
    },
    /// Score every dossier.
    Score {
        #[arg(long)]
        store: PathBuf,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Corpus summary per presence case.
    Report {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Serve the search API (and optionally a UI bundle).
    Serve {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = 8000)]
        port: u16,
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Mean System Usability Scale score of a CSV of responses.
    Sus { file: PathBuf },
    /// DREAD rating from five factors, each 1 to 3.
    Dread {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        damage: u8,
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        reproducibility: u8,
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        exploitability: u8,
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        affected_users: u8,
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        discoverability: u8,
    },
}

#[derive(Args)]
struct HarvestArgs {
    /// Base URL of the portal, e.g. http://127.0.0.1:8080
    #[arg(long)]
    portal: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    #[arg(long, default_value_t = 50)]
    delay_ms: u64,
    /// Comma-separated DL seeds; defaults to the first serial of 2010 at RTOs 1 to 5.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<String>,
    #[arg(long)]
    dl_span: Option<u32>,
    /// Highest constituency to sweep (from 1).
    #[arg(long)]
    constituencies: Option<u8>,
    #[arg(long)]
    no_pan: bool,
    /// Copy social profiles from a corpus directory into the store.
    #[arg(long)]
    social_from: Option<PathBuf>,
}

#[derive(Args)]
struct ScoringArgs {
    /// CSV of (attribute, percentage) or (attribute, level) rows.
    #[arg(long)]
    sensitivity: Option<PathBuf>,
    /// Record-count exponent denominator; omit for infinity.
    #[arg(long)]
    x: Option<f64>,
    /// Score the best single record instead of the attribute union.
    #[arg(long)]
    max_mode: bool,
}

impl ScoringArgs {
    fn table(&self) -> Result<SensitivityTable> {
        match &self.sensitivity {
            Some(p) => Ok(SensitivityTable::from_csv(p)?),
            None => Ok(SensitivityTable::default()),
        }
    }

    fn params(&self) -> Result<ScoreParams> {
        let p = ScoreParams {
            x: self.x.unwrap_or(f64::INFINITY),
            mode: if self.max_mode { ScoreMode::Max } else { ScoreMode::Union },
            ..ScoreParams::default()
        };
        p.validate()?;
        Ok(p)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    match run(cli.command, mode) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, mode: ExecMode) -> Result<()> {
    match command {
        Command::Synth { people, seed, out, noise } => {
            let mut config = SynthConfig::new(seed, people);
            if let Some(n) = noise {
                config.name_noise_rate = n;
            }
            let (corpus, truth) = synthesize(&config)?;
            write_corpus(&out, &corpus, &truth)?;
            println!(
                "wrote {} voters, {} licences, {} PANs, {} phones, {} social profiles to {}",
                corpus.voters.len(),
                corpus.licences.len(),
                corpus.pans.len(),
                corpus.phones.len(),
                corpus.social.len(),
                out.display()
            );
        }
        Command::Portal {
            corpus,
            port,
            rate,
            captcha,
            latency,
            row_cap,
            bind,
        } => {
            let config = PortalConfig {
                corpus,
                port,
                rate_limit: rate,
                captcha_required: captcha,
                latency_ms: latency,
                row_cap,
            };
            let portal = Arc::new(Portal::load(config)?);
            let server = serve_portal(portal, SocketAddr::new(bind, port))?;
            println!("portal listening on {}", server.url());
            server.wait();
        }
        Command::Harvest(args) => harvest(args)?,
        Command::Link { store, address_threshold } => {
            let s = load_store(&store)?;
            let mut config = LinkConfig { mode, ..LinkConfig::default() };
            if let Some(t) = address_threshold {
                if !(0.0..=1.0).contains(&t) {
                    bail!("address threshold {t} is outside 0..1");
                }
                config.address_threshold = t;
            }
            let linked = Linked::build(&s, &config);
            linked.write(&store)?;
            println!(
                "{} dossiers ({} cross-database), {} family trees, {} combined social profiles",
                linked.dossiers.len(),
                linked.dossiers.iter().filter(|d| d.identity_sources() >= 2).count(),
                mosaic_core::link::tree_coverage(&linked.trees),
                linked.social.iter().filter(|c| c.members.len() > 1).count()
            );
        }
        Command::Score { store, scoring } => score(&store, &scoring, mode)?,
        Command::Report { store, json, scoring } => {
            let s = load_store(&store)?;
            let linked = linked_for(&store, &s, mode)?;
            let report = corpus_report(&s, &linked, &scoring.table()?, &scoring.params()?, mode)?;
            let text = serde_json::to_string_pretty(&report)?;
            std::fs::write(store.join(REPORT_FILE), &text).context("writing report.json")?;
            if json {
                println!("{text}");
            } else {
                print!("{}", render_report_text(&report));
            }
        }
        Command::Serve {
            store,
            port,
            static_dir,
            bind,
            scoring,
        } => {
            load_store(&store)?;
            let index = SearchIndex::open(&store, &scoring.table()?, &scoring.params()?, mode)?;
            let server = serve_api(Arc::new(index), static_dir, SocketAddr::new(bind, port))?;
            println!("search API listening on {}/api", server.url());
            server.wait();
        }
        Command::Sus { file } => {
            let responses = read_sus_csv(&file)?;
            println!("{:.1}", sus_score(&responses)?);
        }
        Command::Dread {
            damage,
            reproducibility,
            exploitability,
            affected_users,
            discoverability,
        } => {
            let d = dread_score([damage, reproducibility, exploitability, affected_users, discoverability])?;
            println!("{} {}", d.total, serde_json::to_value(d.band)?.as_str().unwrap_or_default());
        }
    }
    Ok(())
}

fn load_store(dir: &Path) -> Result<Store> {
    if !dir.is_dir() {
        bail!("store {} does not exist", dir.display());
    }
    Ok(Store::load(dir)?)
}

fn linked_for(dir: &Path, store: &Store, mode: ExecMode) -> Result<Linked> {
    if Linked::is_present(dir) {
        Ok(Linked::read(dir)?)
    } else {
        Ok(Linked::build(store, &LinkConfig { mode, ..LinkConfig::default() }))
    }
}

#[derive(Serialize)]
struct ScoreLine<'a> {
    dossier_id: &'a str,
    score: f64,
    attributes: &'a [(mosaic_core::Attribute, u8)],
}

fn score(dir: &Path, args: &ScoringArgs, mode: ExecMode) -> Result<()> {
    let store = load_store(dir)?;
    let linked = linked_for(dir, &store, mode)?;
    let (table, params) = (args.table()?, args.params()?);
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(dir.join(SCORES_FILE)).with_context(|| format!("creating {SCORES_FILE}"))?,
    );
    let mut histogram = std::collections::BTreeMap::<String, usize>::new();
    for d in &linked.dossiers {
        let s = privacy_score(d, &table, &params)?;
        serde_json::to_writer(
            &mut out,
            &ScoreLine {
                dossier_id: &d.dossier_id,
                score: s.value,
                attributes: &s.attributes,
            },
        )?;
        out.write_all(b"\n")?;
        *histogram.entry(format!("{:>6}", s.value)).or_default() += 1;
    }
    out.flush()?;
    println!("sensitivity levels ({}):", table.context);
    for (a, l) in &table.levels {
        println!("  {:<14} {l}", a.to_string());
    }
    println!("dossiers per score:");
    for (score, n) in histogram.iter().rev() {
        println!("  {score} {n:>9}");
    }
    Ok(())
}

fn harvest(args: HarvestArgs) -> Result<()> {
    let mut plan = HarvestPlan {
        request_budget: args.budget,
        concurrency: args.concurrency,
        politeness_delay_ms: args.delay_ms,
        chain_pan: !args.no_pan,
        ..HarvestPlan::default()
    };
    if !args.seeds.is_empty() {
        plan.dl_seeds = args
            .seeds
            .iter()
            .map(|s| DlNumber::parse(s).with_context(|| format!("bad DL seed {s:?}")))
            .collect::<Result<_>>()?;
    }
    if let Some(span) = args.dl_span {
        plan.dl_span = span;
    }
    if let Some(c) = args.constituencies {
        plan.constituencies = (1..=c).collect();
    }
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let fetcher = HttpFetcher::new(&args.portal);
    let stats = match harvest_all(&fetcher, &plan, &args.out) {
        Ok(s) => s,
        Err(HarvestError::BudgetExhausted(s)) => {
            eprintln!("request budget exhausted; partial results kept, rerun to resume");
            *s
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(dir) = &args.social_from {
        let corpus = Corpus::read_dir(dir)?;
        let mut store = Store::load(&args.out)?;
        store.social = corpus.to_store().social;
        store.save(&args.out)?;
    }
    println!(
        "{} queries ({} resumed), {} records stored, {} throttled, {} challenges, {:.1}s",
        stats.total_queries(),
        stats.queries_resumed,
        stats.total_stored(),
        stats.throttle_events,
        stats.captcha_solves,
        stats.wall_time_secs
    );
    Ok(())
}
