use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use negaffect::affect::{build_profiles, EmoticonConfig, Lexicon, Method};
use negaffect::lexcorr::{corpus_affect, label_all, log_odds_all, TiePolicy, TokenStats};
use negaffect::pipeline::{CorpusFormat, RunConfig, Session};
use negaffect::synthetic::{generate, SyntheticSpec};
use negaffect::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn session(exec: Execution) -> Session {
    let data = generate(&SyntheticSpec::full()).expect("synthetic corpus");
    Session::from_parts(
        RunConfig::new("synthetic.jsonl", CorpusFormat::Canonical),
        data.corpus,
        EmoticonConfig::builtin(),
        Lexicon::builtin(),
        Some(data.scores),
        exec,
    )
    .expect("session")
}

fn profiles(c: &mut Criterion) {
    let s = session(Execution::Sequential);
    let mut g = c.benchmark_group("build_profiles");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_profiles(&s.corpus, &s.emoticons, &s.lexicon, s.scores.as_ref(), exec).unwrap())
        });
    }
    g.finish();
}

fn logodds(c: &mut Criterion) {
    let s = session(Execution::Sequential);
    let affect = corpus_affect(&s.corpus, &s.emoticons, &s.lexicon, Execution::Parallel);
    let labels = label_all(&affect, Method::Contextual, s.scores.as_ref(), &TiePolicy::Drop, Execution::Parallel).unwrap();
    let stats = TokenStats::from_labels(&affect, &labels).unwrap();
    let mut g = c.benchmark_group("log_odds_all");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| log_odds_all(black_box(&stats), 500.0, exec).unwrap())
        });
    }
    g.finish();
}

fn regressions(c: &mut Criterion) {
    let mut g = c.benchmark_group("regressions");
    g.sample_size(20);
    for (name, exec) in MODES {
        let s = session(exec);
        let analysis = s.analysis().unwrap();
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| s.regressions(black_box(&analysis))));
    }
    g.finish();
}

criterion_group!(benches, profiles, logodds, regressions);
criterion_main!(benches);
