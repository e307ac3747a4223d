use negaffect::affect::{EmoticonConfig, Lexicon, Method};
use negaffect::pipeline::{CorpusFormat, RunConfig, Session};
use negaffect::synthetic::{generate, SyntheticSpec};
use negaffect::Execution;

fn session(spec: &SyntheticSpec, out: &std::path::Path, exec: Execution) -> Session {
    let data = generate(spec).unwrap();
    let mut cfg = RunConfig::new("unused.jsonl", CorpusFormat::Canonical);
    cfg.output.dir = out.to_path_buf();
    Session::from_parts(
        cfg,
        data.corpus,
        EmoticonConfig::builtin(),
        Lexicon::builtin(),
        Some(data.scores),
        exec,
    )
    .unwrap()
}

#[test]
fn full_size_regression_dfs() {
    let dir = tempfile::tempdir().unwrap();
    let s = session(&SyntheticSpec::full(), dir.path(), Execution::Parallel);
    assert_eq!(s.exclusions.entries.len(), 48);
    let analysis = s.analysis().unwrap();
    assert_eq!(analysis.table.rows.len(), 2060);
    assert_eq!(analysis.layout.individual.len(), 14);
    for r in s.regressions(&analysis) {
        let res = r.result.unwrap();
        assert_eq!(res.n(), 2012);
        let dfs: Vec<(usize, usize)> = res.steps.iter().map(|f| (f.df_model, f.df_resid)).collect();
        let want = if r.method == Method::Contextual {
            vec![(14, 1997), (20, 1991), (26, 1985)]
        } else {
            vec![(14, 1997), (18, 1993), (22, 1989)]
        };
        assert_eq!(dfs, want, "{} / {}", r.method, r.outcome);
    }
}

#[test]
fn sequential_and_parallel_reports_match() {
    let spec = SyntheticSpec::small(120, 3);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = session(&spec, a.path(), Execution::Sequential).cmd_report().unwrap();
    let fb = session(&spec, b.path(), Execution::Parallel).cmd_report().unwrap();
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(std::fs::read_to_string(x).unwrap(), std::fs::read_to_string(y).unwrap(), "{}", x.display());
    }
}
