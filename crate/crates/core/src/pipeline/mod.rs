//! Analysis runs: configuration, loading, the individual commands and their
//! report files.

mod analyses;
mod config;
mod model;
mod report;
mod table;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub use analyses::{
    available, continuous_measures, cross_method, discrete, logodds, measure_rows, regressions, samples,
    shared_dimensions, CrossCell, DiscreteRow, LogoddsParams, LogoddsReport, LogoddsSection, MeasureRow,
    RegressionResult, STEP_LABELS,
};
pub use config::{
    AffectConfig, AnalysisConfig, CorpusConfig, CorpusFormat, ExclusionConfig, ExclusionPreset, OutputConfig,
    ReportFormat, RunConfig,
};
pub use model::{Coefficient, FittedPredictor, ModelProvenance, Prediction, OUTCOME_RANGE, SCHEMA_VERSION};
pub use report::{md_table, num, CsvDoc};
pub use table::{
    build_table, dummy_name, is_known_column, layout, row_contexts, DummyGroup, Layout, RowContext, OUTCOMES,
    PARTNER_PREFIX,
};

use crate::affect::{
    build_profiles, load_contextual_scores, AffectProfile, ContextualScores, EmoticonConfig, Lexicon, Method,
    UtteranceAffect,
};
use crate::corpus::{
    apply_exclusions, ingest_canonical, ingest_release_adapter, Corpus, ExclusionReport, Variable,
};
use crate::error::{Error, Result};
use crate::lexcorr::corpus_affect;
use crate::stats::{hierarchical_fit, AnalysisTable};
use crate::Execution;

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    match format {
        CorpusFormat::Canonical => ingest_canonical(path),
        CorpusFormat::Release => ingest_release_adapter(path),
    }
}

/// Profiles, design layout and the flattened table of one corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub profiles: Vec<AffectProfile>,
    pub layout: Layout,
    pub table: AnalysisTable,
}

/// Everything a command needs, loaded once.
#[derive(Debug, Clone)]
pub struct Session {
    pub config: RunConfig,
    /// The corpus after exclusions.
    pub corpus: Corpus,
    pub exclusions: ExclusionReport,
    pub emoticons: EmoticonConfig,
    pub lexicon: Lexicon,
    pub scores: Option<ContextualScores>,
    pub exec: Execution,
}

impl Session {
    pub fn load(config: RunConfig, exec: Execution) -> Result<Session> {
        config.validate()?;
        let corpus = load_corpus(&config.corpus.path, config.corpus.format)?;
        let emoticons = match &config.affect.emoticons {
            Some(p) => EmoticonConfig::load(p)?,
            None => EmoticonConfig::builtin(),
        };
        let lexicon = match &config.affect.lexicon {
            Some(p) => Lexicon::load(p)?,
            None => Lexicon::builtin(),
        };
        let scores = match &config.affect.scores {
            Some(p) => Some(load_contextual_scores(p, &corpus, &emoticons)?),
            None => None,
        };
        Session::from_parts(config, corpus, emoticons, lexicon, scores, exec)
    }

    /// Builds a session from in-memory inputs; exclusions are applied here.
    pub fn from_parts(
        config: RunConfig,
        corpus: Corpus,
        emoticons: EmoticonConfig,
        lexicon: Lexicon,
        scores: Option<ContextualScores>,
        exec: Execution,
    ) -> Result<Session> {
        config.validate()?;
        let (corpus, exclusions) = apply_exclusions(&corpus, &config.exclusion_policy()?);
        Ok(Session {
            config,
            corpus,
            exclusions,
            emoticons,
            lexicon,
            scores,
            exec,
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.config.output.dir
    }

    /// Configured methods that have data.
    pub fn methods(&self) -> Vec<Method> {
        available(&self.config.analysis.methods, self.scores.as_ref())
    }

    pub fn profiles(&self) -> Result<Vec<AffectProfile>> {
        build_profiles(&self.corpus, &self.emoticons, &self.lexicon, self.scores.as_ref(), self.exec)
    }

    fn references(&self) -> Result<BTreeMap<Variable, String>> {
        self.config
            .analysis
            .reference_levels
            .iter()
            .map(|(k, v)| {
                let var = Variable::from_name(k).ok_or_else(|| Error::Config(format!("unknown variable {k}")))?;
                Ok((var, v.clone()))
            })
            .collect()
    }

    pub fn analysis(&self) -> Result<Analysis> {
        let profiles = self.profiles()?;
        let contexts = row_contexts(&self.corpus, &profiles)?;
        let layout = layout(&contexts, &self.config.individual_variables(), &self.references()?)?;
        let table = build_table(&contexts, &layout)?;
        drop(contexts);
        Ok(Analysis {
            profiles,
            layout,
            table,
        })
    }

    pub fn utterance_affect(&self) -> Vec<UtteranceAffect> {
        corpus_affect(&self.corpus, &self.emoticons, &self.lexicon, self.exec)
    }

    fn prepare_out(&self) -> Result<&Path> {
        let dir = self.out_dir();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(dir)
    }

    fn emit(&self, stem: &str, csv: Option<String>, md: Option<String>) -> Result<Vec<PathBuf>> {
        let dir = self.prepare_out()?;
        let mut written = Vec::new();
        if let (Some(csv), true) = (csv, self.config.wants(ReportFormat::Csv)) {
            let p = dir.join(format!("{stem}.csv"));
            report::write_text(&p, &csv)?;
            written.push(p);
        }
        if let (Some(md), true) = (md, self.config.wants(ReportFormat::Markdown)) {
            let p = dir.join(format!("{stem}.md"));
            report::write_text(&p, &md)?;
            written.push(p);
        }
        Ok(written)
    }

    /// Writes `profiles.csv`: one row per participant-in-dialogue.
    pub fn cmd_extract(&self) -> Result<Vec<PathBuf>> {
        let profiles = self.profiles()?;
        let dir = self.prepare_out()?;
        let p = dir.join("profiles.csv");
        report::write_text(&p, &report::profiles_csv(&profiles))?;
        Ok(vec![p])
    }

    pub fn correlations(&self, analysis: &Analysis) -> Result<(Vec<MeasureRow>, Vec<CrossCell>)> {
        let methods = self.methods();
        let measures = continuous_measures(&self.config.individual_variables(), &methods);
        let rows = measure_rows(&analysis.table, &measures)?;
        let cells = cross_method(&analysis.table, &shared_dimensions(&methods))?;
        Ok((rows, cells))
    }

    fn correlations_md(rows: &[MeasureRow], cells: &[CrossCell]) -> String {
        format!(
            "### Continuous measures\n\n{}\n### Cross-method correlations\n\n{}",
            report::correlations_md(rows),
            report::cross_method_md(cells)
        )
    }

    pub fn cmd_correlations(&self) -> Result<Vec<PathBuf>> {
        let analysis = self.analysis()?;
        let (rows, cells) = self.correlations(&analysis)?;
        let mut written = self.emit("correlations", Some(report::correlations_csv(&rows)), None)?;
        written.extend(self.emit("cross_method", Some(report::cross_method_csv(&cells)), None)?);
        written.extend(self.emit("correlations", None, Some(Self::correlations_md(&rows, &cells)))?);
        Ok(written)
    }

    pub fn regressions(&self, analysis: &Analysis) -> Vec<RegressionResult> {
        regressions(
            &analysis.table,
            &analysis.layout,
            &self.methods(),
            &self.config.analysis.outcomes,
            self.exec,
        )
    }

    pub fn cmd_regression(&self) -> Result<Vec<PathBuf>> {
        let analysis = self.analysis()?;
        let results = self.regressions(&analysis);
        self.emit(
            "regression",
            Some(report::regression_csv(&results)),
            Some(report::regression_md(&results)),
        )
    }

    pub fn discrete(&self) -> Vec<DiscreteRow> {
        discrete(&self.corpus, &self.config.analysis.outcomes, self.config.analysis.t_test)
    }

    pub fn cmd_discrete(&self) -> Result<Vec<PathBuf>> {
        let rows = self.discrete();
        self.emit("discrete", Some(report::discrete_csv(&rows)), Some(report::discrete_md(&rows)))
    }

    pub fn logodds_params(&self) -> Result<LogoddsParams> {
        let a = &self.config.analysis;
        Ok(LogoddsParams {
            alpha0: a.alpha0,
            tie_policy: self.config.tie_policy()?,
            min_count: a.min_count,
            top_k: a.top_k,
        })
    }

    pub fn logodds(&self, affect: &[UtteranceAffect]) -> Result<LogoddsReport> {
        logodds(affect, &self.methods(), self.scores.as_ref(), &self.logodds_params()?, self.exec)
    }

    pub fn cmd_logodds(&self) -> Result<Vec<PathBuf>> {
        let rep = self.logodds(&self.utterance_affect())?;
        self.emit("logodds", Some(report::logodds_csv(&rep)), Some(report::logodds_md(&rep)))
    }

    fn require_scores(&self, what: &str) -> Result<&ContextualScores> {
        self.scores
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{what} needs contextual scores (affect.scores)")))
    }

    pub fn cmd_samples(&self) -> Result<Vec<PathBuf>> {
        let scores = self.require_scores("samples")?;
        let list = samples(&self.corpus, &self.utterance_affect(), scores, self.config.analysis.samples_k)?;
        self.emit("samples", Some(report::samples_csv(&list)), Some(report::samples_md(&list)))
    }

    pub fn provenance(&self) -> ModelProvenance {
        ModelProvenance {
            config_sha256: self.config.sha256(),
            corpus_sha256: self.corpus.provenance.source_sha256.clone(),
        }
    }

    /// Fits all three blocks for `outcome` with `method`'s affect features.
    pub fn fit(&self, outcome: &str, method: Method) -> Result<FittedPredictor> {
        if !OUTCOMES.contains(&outcome) {
            return Err(Error::Config(format!("unknown outcome {outcome:?}")));
        }
        if method == Method::Contextual {
            self.require_scores("the contextual model")?;
        }
        let analysis = self.analysis()?;
        let res = hierarchical_fit(&analysis.table, &analysis.layout.blocks(method), outcome)?;
        Ok(FittedPredictor::from_fit(res.last(), outcome, method, self.provenance()))
    }

    pub fn predict(&self, model: &FittedPredictor) -> Result<Vec<Prediction>> {
        if self.scores.is_none() {
            let needs: Vec<&str> = model.names().into_iter().filter(|n| n.contains("contextual_")).collect();
            if !needs.is_empty() {
                return Err(Error::Config(format!(
                    "model predictors missing from the input (no contextual scores): {}",
                    needs.join(", ")
                )));
            }
        }
        let profiles = self.profiles()?;
        let contexts = row_contexts(&self.corpus, &profiles)?;
        model.predict(&contexts)
    }

    pub fn cmd_predict(&self, model: &FittedPredictor, out: &Path) -> Result<Vec<PathBuf>> {
        let preds = self.predict(model)?;
        if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        report::write_text(out, &report::predictions_csv(&preds))?;
        Ok(vec![out.to_path_buf()])
    }

    /// Runs every analysis and writes all tables plus `report.md`.
    pub fn cmd_report(&self) -> Result<Vec<PathBuf>> {
        let analysis = self.analysis()?;
        let dir = self.prepare_out()?;
        let mut written = Vec::new();

        let p = dir.join("profiles.csv");
        report::write_text(&p, &report::profiles_csv(&analysis.profiles))?;
        written.push(p);
        written.extend(self.emit("exclusions", Some(report::exclusions_csv(&self.exclusions)), None)?);

        let (rows, cells) = self.correlations(&analysis)?;
        written.extend(self.emit("correlations", Some(report::correlations_csv(&rows)), None)?);
        written.extend(self.emit("cross_method", Some(report::cross_method_csv(&cells)), None)?);
        let regs = self.regressions(&analysis);
        written.extend(self.emit("regression", Some(report::regression_csv(&regs)), None)?);
        let disc = self.discrete();
        written.extend(self.emit("discrete", Some(report::discrete_csv(&disc)), None)?);
        let affect = self.utterance_affect();
        let lo = self.logodds(&affect)?;
        written.extend(self.emit("logodds", Some(report::logodds_csv(&lo)), None)?);
        let samp = match &self.scores {
            Some(s) => Some(samples(&self.corpus, &affect, s, self.config.analysis.samples_k)?),
            None => None,
        };
        if let Some(s) = &samp {
            written.extend(self.emit("samples", Some(report::samples_csv(s)), None)?);
        }

        let mut md = String::from("# Negotiation affect report\n\n");
        let sum = self.corpus.summary();
        let _ = writeln!(
            md,
            "- dialogues: {}\n- utterances: {}\n- participant rows: {}\n- corpus sha256: `{}`\n- config sha256: `{}`",
            sum.dialogues,
            sum.utterances,
            sum.participant_rows,
            self.corpus.provenance.source_sha256,
            self.config.sha256()
        );
        let mut by_var: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.exclusions.entries {
            *by_var.entry(e.variable.name()).or_default() += 1;
        }
        for (v, n) in by_var {
            let _ = writeln!(md, "- excluded {v} values: {n}");
        }
        for g in &analysis.layout.dummies {
            let _ = writeln!(
                md,
                "- {} reference level: {}{}",
                g.variable,
                g.reference,
                if g.unobserved.is_empty() {
                    String::new()
                } else {
                    format!(" (no data for {})", g.unobserved.join(", "))
                }
            );
        }
        let _ = write!(md, "\n## Correlations\n\n{}\n", Self::correlations_md(&rows, &cells));
        let _ = write!(md, "## Regression\n\n{}", report::regression_md(&regs));
        let _ = write!(md, "## Group differences\n\n{}\n", report::discrete_md(&disc));
        let _ = write!(md, "## Lexical correlates\n\n{}", report::logodds_md(&lo));
        match &samp {
            Some(s) => {
                let _ = write!(md, "## High-confidence samples\n\n{}", report::samples_md(s));
            }
            None => md.push_str("## High-confidence samples\n\nNo contextual scores supplied.\n"),
        }
        if self.config.wants(ReportFormat::Markdown) {
            let p = dir.join("report.md");
            report::write_text(&p, &md)?;
            written.push(p);
        }
        Ok(written)
    }
}
