use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mosaic_core::link::{build_family_trees, link_cross_db, LinkConfig, Linked};
use mosaic_core::score::{corpus_report, ScoreParams, SensitivityTable};
use mosaic_core::synth::{synthesize, SynthConfig};
use mosaic_core::ExecMode;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn exec_modes(c: &mut Criterion) {
    let (corpus, _) = synthesize(&SynthConfig::new(42, 10_000)).unwrap();
    let store = corpus.to_store();
    let linked = Linked::build(&store, &LinkConfig::default());
    let table = SensitivityTable::default();
    let params = ScoreParams::default();

    let mut g = c.benchmark_group("10k");
    g.sample_size(10);
    for (name, mode) in MODES {
        let config = LinkConfig { mode, ..LinkConfig::default() };
        g.bench_with_input(BenchmarkId::new("link_cross_db", name), &config, |b, cfg| {
            b.iter(|| black_box(link_cross_db(&store, cfg)))
        });
        g.bench_with_input(BenchmarkId::new("family_trees", name), &mode, |b, &m| {
            b.iter(|| black_box(build_family_trees(&corpus.voters, m)))
        });
        g.bench_with_input(BenchmarkId::new("corpus_report", name), &mode, |b, &m| {
            b.iter(|| black_box(corpus_report(&store, &linked, &table, &params, m).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, exec_modes);
criterion_main!(benches);
