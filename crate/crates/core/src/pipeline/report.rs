//! CSV and Markdown rendering of analysis results.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::affect::{AffectProfile, EmotionLabel, Method};
use crate::corpus::ExclusionReport;
use crate::error::{Error, Result};
use crate::lexcorr::Sample;
use crate::stats::{stars, Correlation};

use super::analyses::{CrossCell, DiscreteRow, LogoddsReport, MeasureRow, RegressionResult, STEP_LABELS};
use super::model::Prediction;
use super::table::OUTCOMES;

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn opt_stars(p: Option<f64>) -> String {
    p.map(|p| stars(p).to_string()).unwrap_or_default()
}

fn fixed(x: f64, places: usize) -> String {
    if x.is_finite() {
        format!("{x:.places$}")
    } else {
        num(x)
    }
}

fn fixed_opt(x: Option<f64>, places: usize) -> String {
    x.map(|x| fixed(x, places)).unwrap_or_else(|| "–".into())
}

/// Accumulates CSV records, with optional `#` comment lines on top.
pub struct CsvDoc {
    comments: Vec<String>,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvDoc {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        CsvDoc {
            comments: Vec::new(),
            writer,
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let body = self.writer.into_inner().expect("in-memory flush");
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&String::from_utf8(body).expect("utf-8 input"));
        out
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Pipe table with padded columns.
pub fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let clean = |s: &str| s.replace('|', "\\|").replace('\n', " ");
    let header: Vec<String> = header.iter().map(|h| clean(h)).collect();
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|c| clean(c)).collect()).collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count().max(3)).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::from("|");
        for (c, w) in cells.iter().zip(&widths) {
            let pad = w - c.chars().count();
            let _ = write!(s, " {c}{} |", " ".repeat(pad));
        }
        s.push('\n');
        s
    };
    let mut out = line(&header);
    out.push('|');
    for w in &widths {
        let _ = write!(out, "{}|", "-".repeat(w + 2));
    }
    out.push('\n');
    for r in &rows {
        out.push_str(&line(r));
    }
    out
}

pub fn profiles_csv(profiles: &[AffectProfile]) -> String {
    let mut header = vec!["dialogue_id".to_string(), "agent".into(), "participant_id".into(), "utterances".into()];
    for m in Method::ALL {
        header.extend(m.columns());
    }
    let mut doc = CsvDoc::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for p in profiles {
        let mut row = vec![
            p.dialogue_id.clone(),
            p.agent.index().to_string(),
            p.participant_id.clone(),
            p.utterances.to_string(),
        ];
        for m in Method::ALL {
            match p.features(m) {
                Some(v) => row.extend(v.into_iter().map(num)),
                None => row.extend(m.columns().iter().map(|_| String::new())),
            }
        }
        doc.row(row);
    }
    doc.finish()
}

pub fn exclusions_csv(report: &ExclusionReport) -> String {
    let mut doc = CsvDoc::new(&["dialogue_id", "agent", "participant_id", "variable", "value", "rule"]);
    for e in &report.entries {
        doc.row([
            e.dialogue_id.clone(),
            e.agent.index().to_string(),
            e.participant_id.clone(),
            e.variable.name().to_string(),
            e.value.clone(),
            e.rule.clone(),
        ]);
    }
    doc.finish()
}

fn corr_cells(c: &Option<Correlation>) -> [String; 3] {
    match c {
        Some(c) => [num(c.r), num(c.p), stars(c.p).to_string()],
        None => Default::default(),
    }
}

pub fn correlations_csv(rows: &[MeasureRow]) -> String {
    let mut header = vec!["measure".to_string(), "n".into(), "mean".into(), "std".into()];
    for o in OUTCOMES {
        header.extend([format!("r_{o}"), format!("p_{o}"), format!("stars_{o}")]);
    }
    header.push("note".into());
    let mut doc = CsvDoc::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for r in rows {
        let mut row = vec![r.measure.clone(), r.n.to_string(), opt(r.mean), opt(r.std)];
        for c in &r.correlations {
            row.extend(corr_cells(c));
        }
        row.push(r.note.clone());
        doc.row(row);
    }
    doc.finish()
}

pub fn correlations_md(rows: &[MeasureRow]) -> String {
    let mut header = vec!["Measure", "Mean", "Std."];
    header.extend(["Satisfaction", "Likeness"]);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![r.measure.clone(), fixed_opt(r.mean, 2), fixed_opt(r.std, 2)];
            for c in &r.correlations {
                row.push(match c {
                    Some(c) => format!("{}{}", fixed(c.r, 3), stars(c.p)),
                    None => "–".into(),
                });
            }
            row
        })
        .collect();
    md_table(&header, &body)
}

pub fn cross_method_csv(cells: &[CrossCell]) -> String {
    let mut doc = CsvDoc::new(&["row", "column", "n", "r", "p", "stars"]);
    for c in cells {
        let n = c.correlation.map(|k| k.n.to_string()).unwrap_or_default();
        let [r, p, s] = corr_cells(&c.correlation);
        doc.row([c.row.clone(), c.column.clone(), n, r, p, s]);
    }
    doc.finish()
}

pub fn cross_method_md(cells: &[CrossCell]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for c in cells {
        if !names.contains(&c.row.as_str()) {
            names.push(&c.row);
        }
    }
    let mut header = vec![""];
    header.extend(names.iter().copied());
    let body: Vec<Vec<String>> = names
        .iter()
        .map(|r| {
            let mut row = vec![r.to_string()];
            for col in &names {
                let cell = cells.iter().find(|c| c.row == *r && c.column == *col);
                row.push(match cell.and_then(|c| c.correlation) {
                    Some(c) => format!("{}{}", fixed(c.r, 3), stars(c.p)),
                    None => "–".into(),
                });
            }
            row
        })
        .collect();
    md_table(&header, &body)
}

const REGRESSION_HEADER: [&str; 18] = [
    "method",
    "outcome",
    "step",
    "label",
    "n",
    "df_model",
    "df_resid",
    "r2",
    "f",
    "p",
    "stars",
    "delta_r2",
    "f_change",
    "change_df1",
    "change_df2",
    "change_p",
    "change_stars",
    "note",
];

pub fn regression_csv(results: &[RegressionResult]) -> String {
    let mut doc = CsvDoc::new(&REGRESSION_HEADER);
    for r in results {
        match &r.result {
            Ok(res) => {
                for (i, (fit, ch)) in res.steps.iter().zip(&res.changes).enumerate() {
                    doc.row([
                        r.method.key().to_string(),
                        r.outcome.clone(),
                        (i + 1).to_string(),
                        STEP_LABELS[i.min(2)].to_string(),
                        fit.n.to_string(),
                        fit.df_model.to_string(),
                        fit.df_resid.to_string(),
                        num(fit.r2),
                        num(fit.f),
                        num(fit.p),
                        stars(fit.p).to_string(),
                        num(ch.delta_r2),
                        num(ch.f_change),
                        ch.df1.to_string(),
                        ch.df2.to_string(),
                        num(ch.p),
                        stars(ch.p).to_string(),
                        String::new(),
                    ]);
                }
            }
            Err(e) => {
                let mut row = vec![r.method.key().to_string(), r.outcome.clone()];
                row.extend(std::iter::repeat_n(String::new(), REGRESSION_HEADER.len() - 3));
                row.push(format!("skipped: {e}"));
                doc.row(row);
            }
        }
    }
    doc.finish()
}

pub fn regression_md(results: &[RegressionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "#### {} / {}\n", r.outcome, r.method);
        match &r.result {
            Ok(res) => {
                let body: Vec<Vec<String>> = res
                    .steps
                    .iter()
                    .zip(&res.changes)
                    .enumerate()
                    .map(|(i, (fit, ch))| {
                        vec![
                            STEP_LABELS[i.min(2)].to_string(),
                            fixed(fit.r2, 3),
                            format!("({}, {})", fit.df_model, fit.df_resid),
                            format!("{}{}", fixed(fit.f, 2), stars(fit.p)),
                            fixed(ch.delta_r2, 3),
                            format!("{}{}", fixed(ch.f_change, 2), stars(ch.p)),
                        ]
                    })
                    .collect();
                out.push_str(&md_table(&["Step", "R²", "df", "F", "ΔR²", "F change"], &body));
            }
            Err(e) => {
                let _ = writeln!(out, "Skipped: {e}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn discrete_csv(rows: &[DiscreteRow]) -> String {
    let mut doc = CsvDoc::new(&["test", "variable", "outcome", "groups", "statistic", "df1", "df2", "p", "stars", "note"]);
    for r in rows {
        doc.row([
            r.test.to_string(),
            r.variable.name().to_string(),
            r.outcome.clone(),
            r.groups.clone(),
            opt(r.statistic),
            opt(r.df1),
            opt(r.df2),
            opt(r.p),
            opt_stars(r.p),
            r.note.clone(),
        ]);
    }
    doc.finish()
}

pub fn discrete_md(rows: &[DiscreteRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.test.to_string(),
                r.variable.name().to_string(),
                r.outcome.clone(),
                r.groups.clone(),
                fixed_opt(r.statistic, 2),
                match (r.df1, r.df2) {
                    (Some(a), Some(b)) => format!("({a}, {b})"),
                    (Some(a), None) => fixed(a, 1),
                    _ => "–".into(),
                },
                r.p.map(|p| format!("{}{}", fixed(p, 4), stars(p))).unwrap_or_else(|| "–".into()),
                r.note.clone(),
            ]
        })
        .collect();
    md_table(&["Test", "Variable", "Outcome", "Groups", "Statistic", "df", "p", "Note"], &body)
}

fn logodds_comments(report: &LogoddsReport) -> Vec<String> {
    let p = &report.params;
    let mut out = vec![format!(
        "alpha0={} tie_policy={} min_count={} top_k={}",
        num(p.alpha0),
        p.tie_policy,
        p.min_count,
        p.top_k
    )];
    for l in &report.label_sets {
        out.push(format!(
            "labels method={} labeled={} unlabeled={} ties={}",
            l.method,
            l.labels.len() - l.unlabeled(),
            l.unlabeled(),
            l.ties
        ));
    }
    for s in report.sections.iter().filter(|s| s.labeled_utterances == 0) {
        out.push(format!("empty method={} category={}", s.method, s.category));
    }
    out
}

pub fn logodds_csv(report: &LogoddsReport) -> String {
    let mut doc = CsvDoc::new(&["method", "category", "rank", "token", "delta", "z", "p", "stars"]);
    for c in logodds_comments(report) {
        doc.comment(c);
    }
    for s in &report.sections {
        for (i, e) in s.entries.iter().enumerate() {
            doc.row([
                s.method.key().to_string(),
                s.category.clone(),
                (i + 1).to_string(),
                e.token.clone(),
                num(e.delta),
                num(e.z),
                num(e.p()),
                e.stars().to_string(),
            ]);
        }
    }
    doc.finish()
}

pub fn logodds_md(report: &LogoddsReport) -> String {
    let mut out = String::new();
    for c in logodds_comments(report).iter().take(1 + report.label_sets.len()) {
        let _ = writeln!(out, "- {c}");
    }
    out.push('\n');
    for s in &report.sections {
        let _ = writeln!(out, "#### {} / {}\n", s.method, s.category);
        if s.labeled_utterances == 0 {
            out.push_str("No utterances carry this label.\n\n");
            continue;
        }
        if s.entries.is_empty() {
            out.push_str("No token reaches the minimum count.\n\n");
            continue;
        }
        let body: Vec<Vec<String>> = s
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                vec![
                    (i + 1).to_string(),
                    e.token.clone(),
                    format!("{}{}", fixed(e.z, 2), e.stars()),
                    fixed(e.delta, 3),
                ]
            })
            .collect();
        out.push_str(&md_table(&["Rank", "Token", "z", "δ"], &body));
        out.push('\n');
    }
    out
}

pub fn samples_csv(samples: &[(EmotionLabel, Vec<Sample>)]) -> String {
    let mut doc = CsvDoc::new(&["category", "rank", "utterance_id", "dialogue_id", "confidence", "text"]);
    doc.comment("excluding utterances with any emoticon or lexicon signal");
    for (label, list) in samples {
        for (i, s) in list.iter().enumerate() {
            doc.row([
                crate::affect::AffectCategory::key(*label).to_string(),
                (i + 1).to_string(),
                s.utterance_id.clone(),
                s.dialogue_id.clone(),
                num(s.confidence),
                s.text.clone(),
            ]);
        }
    }
    doc.finish()
}

pub fn samples_md(samples: &[(EmotionLabel, Vec<Sample>)]) -> String {
    let body: Vec<Vec<String>> = samples
        .iter()
        .flat_map(|(label, list)| {
            list.iter()
                .map(move |s| vec![label.to_string(), s.text.clone(), fixed(s.confidence, 3), s.utterance_id.clone()])
        })
        .collect();
    md_table(&["Label", "Utterance", "Confidence", "Id"], &body)
}

pub fn predictions_csv(predictions: &[Prediction]) -> String {
    let mut doc = CsvDoc::new(&[
        "dialogue_id",
        "agent",
        "participant_id",
        "predicted",
        "clamped",
        "out_of_range",
        "missing",
    ]);
    for p in predictions {
        doc.row([
            p.dialogue_id.clone(),
            p.agent.index().to_string(),
            p.participant_id.clone(),
            opt(p.predicted),
            opt(p.clamped()),
            p.out_of_range().map(|b| b.to_string()).unwrap_or_default(),
            p.missing.join(";"),
        ]);
    }
    doc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(2.0), "2");
        assert_eq!(fixed(-0.28751, 3), "-0.288");
    }

    #[test]
    fn csv_with_comments() {
        let mut d = CsvDoc::new(&["a", "b"]);
        d.comment("x=1");
        d.row(["1", "has,comma"]);
        assert_eq!(d.finish(), "# x=1\na,b\n1,\"has,comma\"\n");
    }

    #[test]
    fn markdown_alignment() {
        let t = md_table(&["k", "value"], &[vec!["long key".into(), "a|b".into()]]);
        assert_eq!(
            t,
            "| k        | value |\n|----------|-------|\n| long key | a\\|b  |\n"
        );
    }
}
