use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negaffect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const RELEASE: &str = r#"[{"dialogue_id": 7,
  "chat_logs": [
    {"id": "mturk_agent_1", "text": "Hello! 🙂", "task_data": {}},
    {"id": "mturk_agent_2", "text": "Hi there", "task_data": {}},
    {"id": "mturk_agent_1", "text": "Submit-Deal", "task_data": {"data": "deal"}},
    {"id": "mturk_agent_2", "text": "Accept-Deal", "task_data": {}}
  ],
  "participant_info": {
    "mturk_agent_1": {
      "value2issue": {"Low": "Firewood", "Medium": "Water", "High": "Food"},
      "outcomes": {"points_scored": 19, "satisfaction": "Slightly satisfied", "opponent_likeness": "Extremely like"},
      "demographics": {"age": 43, "gender": "male", "ethnicity": "white american", "education": "Some 4 year college, bachelor's degree"},
      "personality": {"svo": "proself", "big-five": {"extraversion": 5.0, "agreeableness": 6.0, "conscientiousness": 6.0, "emotional-stability": 5.0, "openness-to-experiences": 5.5}}
    },
    "mturk_agent_2": {
      "value2issue": {"Low": "Food", "Medium": "Firewood", "High": "Water"},
      "outcomes": {"points_scored": 17, "satisfaction": "Extremely dissatisfied", "opponent_likeness": "Undecided"},
      "demographics": {"age": 16, "gender": "female", "ethnicity": "asian american", "education": "Master's degree"},
      "personality": {"svo": "unclassified", "big-five": {"extraversion": 1.5, "agreeableness": 7, "conscientiousness": 2, "emotional-stability": 3, "openness-to-experiences": 4}}
    }
  },
  "annotations": []}]"#;

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["extract"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    let out = run(&["fit", "--outcome", "points", "--method", "lexicon", "--model", "m.json"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_input_is_an_io_error() {
    let out = run(&["ingest", "--input", "/nonexistent/corpus.jsonl"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("/nonexistent/corpus.jsonl"));
}

#[test]
fn bad_config_and_bad_records_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[corpus]\npath = \"x.jsonl\"\ncolour = \"red\"\n").unwrap();
    let out = run(&["extract", "--config", s(&cfg)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("colour"), "{}", stderr(&out));

    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, r#"{"dialogue_id":"d","utterances":[{"id":"u","speaker":2,"text":"hi"}],"participants":[{"participant_id":"a"},{"participant_id":"b"}]}"#).unwrap();
    let out = run(&["ingest", "--input", s(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("speaker"), "{}", stderr(&out));
}

#[test]
fn ingest_writes_scorer_input_with_emoticons_stripped() {
    let dir = tempfile::tempdir().unwrap();
    let si = dir.path().join("scorer_input.jsonl");
    let out = run(&["ingest", "--input", s(&fixture("corpus.jsonl")), "--scorer-input", s(&si)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("dialogues=2 utterances=8 participant_rows=4"));
    let lines: Vec<String> = fs::read_to_string(&si).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], r#"{"utterance_id":"fx-1-0","text":"Hello I hope you are well"}"#);
    assert_eq!(lines[7], r#"{"utterance_id":"fx-2-3","text":""}"#);
}

#[test]
fn ingest_release_reports_exclusions_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let release = dir.path().join("release.json");
    fs::write(&release, RELEASE).unwrap();
    let canonical = dir.path().join("canonical.jsonl");
    let out = run(&[
        "ingest",
        "--input",
        s(&release),
        "--format",
        "release",
        "--exclusion-preset",
        "sparse-levels",
        "--out",
        s(&canonical),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("dialogues=1 utterances=2"), "{text}");
    assert!(text.contains("excluded_values=2"), "{text}");
    // the canonical export reads back to the same summary
    let again = run(&["ingest", "--input", s(&canonical)]);
    assert_eq!(code(&again), 0, "{}", stderr(&again));
    assert!(stdout(&again).contains("dialogues=1 utterances=2 participant_rows=2"));
}

#[test]
fn fixture_report_runs_with_config_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        "logodds",
        "--config",
        s(&fixture("run.toml")),
        "--out-dir",
        s(dir.path()),
        "--tie-policy",
        "priority",
        "--tie-priority",
        "anxiety",
        "--methods",
        "lexicon",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("logodds.csv")).unwrap();
    assert!(csv.contains("tie_policy=priority(anxiety)"), "{csv}");
    assert!(csv.contains("# labels method=lexicon labeled=6 unlabeled=2 ties=1"), "{csv}");
    assert!(!csv.contains("method=emoticon"));
}

#[test]
fn synth_report_fit_predict() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, scores) = (dir.path().join("c.jsonl"), dir.path().join("s.jsonl"));
    let out = run(&[
        "synth",
        "--dialogues",
        "80",
        "--seed",
        "4",
        "--excluded-rows",
        "0",
        "--corpus",
        s(&corpus),
        "--scores",
        s(&scores),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let report = dir.path().join("report");
    let common = ["--corpus", s(&corpus), "--scores", s(&scores), "--out-dir", s(&report)];
    let out = run(&[&["report"][..], &common].concat());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for f in ["profiles.csv", "correlations.csv", "regression.csv", "logodds.csv", "samples.csv", "report.md"] {
        assert!(report.join(f).is_file(), "{f} missing");
    }

    let model = dir.path().join("model.json");
    let out = run(&[
        &["fit", "--outcome", "likeness", "--method", "contextual", "--model", s(&model)][..],
        &common,
    ]
    .concat());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let json: String = fs::read_to_string(&model).unwrap();
    assert!(json.contains("\"schema_version\": 1"), "{json}");

    let preds = dir.path().join("preds.csv");
    let out = run(&[&["predict", "--model", s(&model), "--out", s(&preds)][..], &common].concat());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = fs::read_to_string(&preds).unwrap();
    assert_eq!(rows.lines().filter(|l| !l.starts_with('#')).count(), 1 + 160);

    // without scores the contextual predictors cannot be computed
    let out = run(&["predict", "--model", s(&model), "--corpus", s(&corpus), "--out-dir", s(&report)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("contextual_joy"), "{}", stderr(&out));
}
