use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use negaffect::affect::{write_contextual_scores, write_scorer_input, EmoticonConfig, Method};
use negaffect::corpus::{apply_exclusions, write_canonical};
use negaffect::pipeline::{load_corpus, CorpusFormat, ExclusionPreset, FittedPredictor, RunConfig, Session};
use negaffect::stats::TTestVariant;
use negaffect::synthetic::{generate, SyntheticSpec};
use negaffect::{Error, Execution};

#[derive(Parser)]
#[command(name = "negaffect", version, about = "Affect features and outcome analysis for negotiation dialogues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus; optionally export it and the scorer input file.
    Ingest(IngestArgs),
    /// Write per-participant affect profiles (profiles.csv).
    Extract(RunArgs),
    /// Run one analysis and write its tables.
    Analyze {
        #[arg(value_enum)]
        analysis: Analysis,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fit the full three-block model for one outcome and method.
    Fit {
        #[arg(long, value_parser = ["satisfaction", "likeness"])]
        outcome: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Model file to write.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Apply a fitted model to the configured corpus.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Predictions CSV; defaults to <out-dir>/predictions.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every analysis and write all tables plus report.md.
    Report(RunArgs),
    /// Write a seeded synthetic corpus and matching score file.
    Synth {
        #[arg(long, default_value_t = 1030)]
        dialogues: usize,
        #[arg(long, default_value_t = 20_211_002)]
        seed: u64,
        #[arg(long, default_value_t = 48)]
        excluded_rows: usize,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        scores: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Analysis {
    Correlations,
    Regression,
    Discrete,
    Logodds,
    Samples,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Emoticon,
    Lexicon,
    Contextual,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Emoticon => Method::Emoticon,
            MethodArg::Lexicon => Method::Lexicon,
            MethodArg::Contextual => Method::Contextual,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Canonical,
    Release,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> CorpusFormat {
        match f {
            FormatArg::Canonical => CorpusFormat::Canonical,
            FormatArg::Release => CorpusFormat::Release,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    None,
    Age,
    SparseLevels,
}

#[derive(Clone, Copy, ValueEnum)]
enum TTestArg {
    Welch,
    Pooled,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "canonical")]
    format: FormatArg,
    /// Write the corpus in canonical form.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the utterance file consumed by the contextual scorer.
    #[arg(long)]
    scorer_input: Option<PathBuf>,
    #[arg(long)]
    emoticons: Option<PathBuf>,
    /// Report how many values this exclusion preset would remove.
    #[arg(long, value_enum)]
    exclusion_preset: Option<PresetArg>,
}

/// Config file plus per-key overrides; flags win over the file.
#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    emoticons: Option<PathBuf>,
    #[arg(long)]
    scores: Option<PathBuf>,
    #[arg(long)]
    exclusions: Option<PathBuf>,
    #[arg(long, value_enum)]
    exclusion_preset: Option<PresetArg>,
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Option<Vec<MethodArg>>,
    #[arg(long)]
    alpha0: Option<f64>,
    /// "drop" or "priority".
    #[arg(long)]
    tie_policy: Option<String>,
    #[arg(long, value_delimiter = ',')]
    tie_priority: Option<Vec<String>>,
    #[arg(long)]
    min_count: Option<u64>,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    samples_k: Option<usize>,
    #[arg(long, value_enum)]
    t_test: Option<TTestArg>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut cfg = match (&self.config, &self.corpus) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, Some(corpus)) => RunConfig::new(corpus, CorpusFormat::Canonical),
            (None, None) => return Err(Error::Config("either --config or --corpus is required".into())),
        };
        if let Some(c) = &self.corpus {
            cfg.corpus.path = c.clone();
        }
        if let Some(f) = self.format {
            cfg.corpus.format = f.into();
        }
        if let Some(p) = &self.lexicon {
            cfg.affect.lexicon = Some(p.clone());
        }
        if let Some(p) = &self.emoticons {
            cfg.affect.emoticons = Some(p.clone());
        }
        if let Some(p) = &self.scores {
            cfg.affect.scores = Some(p.clone());
        }
        if let Some(p) = &self.exclusions {
            cfg.exclusions.file = Some(p.clone());
        }
        if let Some(p) = self.exclusion_preset {
            cfg.exclusions.preset = preset(p);
        }
        let a = &mut cfg.analysis;
        if let Some(m) = &self.methods {
            a.methods = m.iter().map(|&m| m.into()).collect();
        }
        if let Some(x) = self.alpha0 {
            a.alpha0 = x;
        }
        if let Some(x) = &self.tie_policy {
            a.tie_policy = x.clone();
        }
        if let Some(x) = &self.tie_priority {
            a.tie_priority = x.clone();
        }
        if let Some(x) = self.min_count {
            a.min_count = x;
        }
        if let Some(x) = self.top_k {
            a.top_k = x;
        }
        if let Some(x) = self.samples_k {
            a.samples_k = x;
        }
        if let Some(t) = self.t_test {
            a.t_test = match t {
                TTestArg::Welch => TTestVariant::Welch,
                TTestArg::Pooled => TTestVariant::Pooled,
            };
        }
        if let Some(d) = &self.out_dir {
            cfg.output.dir = d.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn session(&self) -> Result<Session, Error> {
        let exec = if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        };
        Session::load(self.config()?, exec)
    }
}

fn preset(p: PresetArg) -> ExclusionPreset {
    match p {
        PresetArg::None => ExclusionPreset::None,
        PresetArg::Age => ExclusionPreset::Age,
        PresetArg::SparseLevels => ExclusionPreset::SparseLevels,
    }
}

fn list(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn ingest(args: &IngestArgs) -> Result<(), Error> {
    let corpus = load_corpus(&args.input, args.format.into())?;
    let s = corpus.summary();
    println!(
        "dialogues={} utterances={} participant_rows={} distinct_participants={} sha256={}",
        s.dialogues, s.utterances, s.participant_rows, s.distinct_participants, corpus.provenance.source_sha256
    );
    if let Some(p) = args.exclusion_preset {
        let mut cfg = RunConfig::new(&args.input, args.format.into());
        cfg.exclusions.preset = preset(p);
        let (_, report) = apply_exclusions(&corpus, &cfg.exclusion_policy()?);
        for e in &report.entries {
            println!(
                "excluded dialogue={} agent={} {}={} ({})",
                e.dialogue_id,
                e.agent.index(),
                e.variable,
                e.value,
                e.rule
            );
        }
        println!("excluded_values={}", report.entries.len());
    }
    if let Some(out) = &args.out {
        write_canonical(&corpus, out)?;
        println!("{}", out.display());
    }
    if let Some(out) = &args.scorer_input {
        let emoticons = match &args.emoticons {
            Some(p) => EmoticonConfig::load(p)?,
            None => EmoticonConfig::builtin(),
        };
        let n = write_scorer_input(&corpus, &emoticons, out)?;
        println!("{} ({n} utterances)", out.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Ingest(args) => ingest(&args),
        Command::Extract(run) => {
            list(&run.session()?.cmd_extract()?);
            Ok(())
        }
        Command::Analyze { analysis, run } => {
            let s = run.session()?;
            let written = match analysis {
                Analysis::Correlations => s.cmd_correlations()?,
                Analysis::Regression => s.cmd_regression()?,
                Analysis::Discrete => s.cmd_discrete()?,
                Analysis::Logodds => s.cmd_logodds()?,
                Analysis::Samples => s.cmd_samples()?,
            };
            list(&written);
            Ok(())
        }
        Command::Fit {
            outcome,
            method,
            model,
            run,
        } => {
            let m = run.session()?.fit(&outcome, method.into())?;
            m.save(&model)?;
            println!(
                "{} (n={}, R²={:.4}, {} predictors)",
                model.display(),
                m.training_n,
                m.training_r2,
                m.coefficients.len()
            );
            Ok(())
        }
        Command::Predict { model, out, run } => {
            let s = run.session()?;
            let m = FittedPredictor::load(&model)?;
            let out = out.unwrap_or_else(|| s.out_dir().join("predictions.csv"));
            list(&s.cmd_predict(&m, &out)?);
            Ok(())
        }
        Command::Report(run) => {
            list(&run.session()?.cmd_report()?);
            Ok(())
        }
        Command::Synth {
            dialogues,
            seed,
            excluded_rows,
            corpus,
            scores,
        } => {
            let spec = SyntheticSpec {
                dialogues,
                seed,
                excluded_rows,
                ..SyntheticSpec::full()
            };
            let data = generate(&spec)?;
            for p in [&corpus, &scores] {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    create_dir(dir)?;
                }
            }
            write_canonical(&data.corpus, &corpus)?;
            write_contextual_scores(&data.scores, &scores)?;
            list(&[corpus, scores]);
            Ok(())
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
