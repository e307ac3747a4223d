//! Analysis results as plain values; [`super::report`] turns them into files.

use crate::affect::{AffectCategory, ContextualScores, EmotionLabel, Method, UtteranceAffect};
use crate::corpus::{Agent, Corpus, Variable};
use crate::error::Result;
use crate::lexcorr::{
    label_all, log_odds_all, top_confident_samples, top_k_correlates, LabelSet, LogOddsEntry, Sample, TiePolicy,
    TokenStats,
};
use crate::stats::{
    anova_oneway, hierarchical_fit, mean_std, pairwise_complete, pearson, t_test, AnalysisTable, Correlation,
    StepwiseResult, TTestVariant,
};
use crate::Execution;

use super::table::{Layout, OUTCOMES};

pub const STEP_LABELS: [&str; 3] = ["Individual Difference", "+ Participant Affect", "+ Partner Affect"];

/// Mean, spread and outcome correlations of one continuous measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    pub measure: String,
    pub n: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    /// One entry per outcome in [`OUTCOMES`] order.
    pub correlations: Vec<Option<Correlation>>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCell {
    pub row: String,
    pub column: String,
    pub correlation: Option<Correlation>,
}

fn correlate(table: &AnalysisTable, a: &str, b: &str) -> Result<std::result::Result<Correlation, String>> {
    let (x, y) = pairwise_complete(&table.column(a)?, &table.column(b)?);
    Ok(pearson(&x, &y).map_err(|e| e.to_string()))
}

/// Methods whose features are present in the table.
pub fn available(methods: &[Method], scores: Option<&ContextualScores>) -> Vec<Method> {
    methods
        .iter()
        .copied()
        .filter(|m| *m != Method::Contextual || scores.is_some())
        .collect()
}

pub fn continuous_measures(individual: &[Variable], methods: &[Method]) -> Vec<String> {
    let mut out: Vec<String> = individual
        .iter()
        .filter(|v| !v.is_categorical())
        .map(|v| v.name().to_string())
        .collect();
    for m in methods {
        out.extend(m.columns());
    }
    out
}

pub fn measure_rows(table: &AnalysisTable, measures: &[String]) -> Result<Vec<MeasureRow>> {
    measures
        .iter()
        .map(|m| {
            let values: Vec<f64> = table.column(m)?.into_iter().flatten().collect();
            let mut notes = Vec::new();
            let (mean, std) = match mean_std(&values) {
                Ok((a, b)) => (Some(a), Some(b)),
                Err(e) => {
                    notes.push(e.to_string());
                    (None, None)
                }
            };
            let mut correlations = Vec::new();
            for o in OUTCOMES {
                match correlate(table, m, o)? {
                    Ok(c) => correlations.push(Some(c)),
                    Err(e) => {
                        notes.push(format!("{o}: {e}"));
                        correlations.push(None)
                    }
                }
            }
            Ok(MeasureRow {
                measure: m.clone(),
                n: values.len(),
                mean,
                std,
                correlations,
                note: notes.join("; "),
            })
        })
        .collect()
}

/// Joy, sadness and anger columns shared across methods; lexicon positive
/// emotions stand in for joy.
pub fn shared_dimensions(methods: &[Method]) -> Vec<String> {
    let mut out = Vec::new();
    for m in methods {
        let joy = if *m == Method::Lexicon { "positive" } else { "joy" };
        for d in [joy, "sadness", "anger"] {
            out.push(format!("{}_{d}", m.key()));
        }
    }
    out
}

pub fn cross_method(table: &AnalysisTable, columns: &[String]) -> Result<Vec<CrossCell>> {
    let mut cells = Vec::with_capacity(columns.len() * columns.len());
    for a in columns {
        for b in columns {
            cells.push(CrossCell {
                row: a.clone(),
                column: b.clone(),
                correlation: correlate(table, a, b)?.ok(),
            });
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub method: Method,
    pub outcome: String,
    pub result: std::result::Result<StepwiseResult, String>,
}

pub fn regressions(
    table: &AnalysisTable,
    layout: &Layout,
    methods: &[Method],
    outcomes: &[String],
    exec: Execution,
) -> Vec<RegressionResult> {
    let jobs: Vec<(Method, &String)> = methods
        .iter()
        .flat_map(|&m| outcomes.iter().map(move |o| (m, o)))
        .collect();
    exec.map(&jobs, |&(method, outcome)| RegressionResult {
        method,
        outcome: outcome.clone(),
        result: hierarchical_fit(table, &layout.blocks(method), outcome).map_err(|e| e.to_string()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRow {
    pub test: &'static str,
    pub variable: Variable,
    pub outcome: String,
    /// e.g. `Female vs Male`, or the ANOVA levels joined by `, `.
    pub groups: String,
    pub statistic: Option<f64>,
    pub df1: Option<f64>,
    pub df2: Option<f64>,
    pub p: Option<f64>,
    pub note: String,
}

fn grouped(corpus: &Corpus, var: Variable, outcome: Variable, level: &str) -> Vec<f64> {
    corpus
        .dialogues
        .iter()
        .flat_map(|d| Agent::BOTH.map(|a| d.participant(a)))
        .filter(|p| p.level(var).and_then(|f| f.value().copied()) == Some(level))
        .filter_map(|p| p.numeric(outcome).and_then(|f| f.value().copied()))
        .collect()
}

/// Gender and SVO t-tests and the ethnicity ANOVA for each outcome.
pub fn discrete(corpus: &Corpus, outcomes: &[String], variant: TTestVariant) -> Vec<DiscreteRow> {
    let mut rows = Vec::new();
    for o in outcomes {
        let ov = Variable::from_name(o).expect("validated outcome");
        for (var, a, b) in [
            (Variable::Gender, "Female", "Male"),
            (Variable::Svo, "Prosocial", "Proself"),
        ] {
            let (ga, gb) = (grouped(corpus, var, ov, a), grouped(corpus, var, ov, b));
            let mut row = DiscreteRow {
                test: "t-test",
                variable: var,
                outcome: o.clone(),
                groups: format!("{a} vs {b}"),
                statistic: None,
                df1: None,
                df2: None,
                p: None,
                note: String::new(),
            };
            if ga.len() < 2 || gb.len() < 2 {
                row.note = format!("skipped: {a} has {} values, {b} has {}", ga.len(), gb.len());
            } else {
                match t_test(&ga, &gb, variant) {
                    Ok(t) => {
                        row.statistic = Some(t.t);
                        row.df1 = Some(t.df);
                        row.p = Some(t.p);
                    }
                    Err(e) => row.note = format!("skipped: {e}"),
                }
            }
            rows.push(row);
        }

        let var = Variable::Ethnicity;
        let present: Vec<(&str, Vec<f64>)> = var
            .levels()
            .iter()
            .map(|l| (*l, grouped(corpus, var, ov, l)))
            .filter(|(_, g)| !g.is_empty())
            .collect();
        let mut row = DiscreteRow {
            test: "anova",
            variable: var,
            outcome: o.clone(),
            groups: present.iter().map(|(l, _)| *l).collect::<Vec<_>>().join(", "),
            statistic: None,
            df1: None,
            df2: None,
            p: None,
            note: String::new(),
        };
        let groups: Vec<Vec<f64>> = present.into_iter().map(|(_, g)| g).collect();
        match anova_oneway(&groups) {
            Ok(a) => {
                row.statistic = Some(a.f);
                row.df1 = Some(a.df_between as f64);
                row.df2 = Some(a.df_within as f64);
                row.p = Some(a.p);
            }
            Err(e) => row.note = format!("skipped: {e}"),
        }
        rows.push(row);
    }
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogoddsParams {
    pub alpha0: f64,
    pub tie_policy: TiePolicy,
    pub min_count: u64,
    pub top_k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogoddsSection {
    pub method: Method,
    pub category: String,
    pub labeled_utterances: usize,
    pub entries: Vec<LogOddsEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogoddsReport {
    pub params: LogoddsParams,
    pub label_sets: Vec<LabelSet>,
    pub sections: Vec<LogoddsSection>,
}

pub fn logodds(
    affect: &[UtteranceAffect],
    methods: &[Method],
    scores: Option<&ContextualScores>,
    params: &LogoddsParams,
    exec: Execution,
) -> Result<LogoddsReport> {
    let mut label_sets = Vec::new();
    let mut sections = Vec::new();
    for &m in methods {
        let labels = label_all(affect, m, scores, &params.tie_policy, exec)?;
        let stats = TokenStats::from_labels(affect, &labels)?;
        let all = log_odds_all(&stats, params.alpha0, exec)?;
        for ((key, entries), size) in m.category_keys().into_iter().zip(all).zip(labels.category_sizes()) {
            sections.push(LogoddsSection {
                method: m,
                category: key.to_string(),
                labeled_utterances: size,
                entries: if size == 0 {
                    Vec::new()
                } else {
                    top_k_correlates(&entries, params.top_k, params.min_count)
                },
            });
        }
        label_sets.push(labels);
    }
    Ok(LogoddsReport {
        params: params.clone(),
        label_sets,
        sections,
    })
}

/// Exclusive high-confidence samples for every classifier label.
pub fn samples(
    corpus: &Corpus,
    affect: &[UtteranceAffect],
    scores: &ContextualScores,
    k: usize,
) -> Result<Vec<(EmotionLabel, Vec<Sample>)>> {
    EmotionLabel::ALL
        .iter()
        .map(|&l| {
            Ok((
                l,
                top_confident_samples(corpus, affect, scores, l, k, &[Method::Emoticon, Method::Lexicon])?,
            ))
        })
        .collect()
}

