use std::collections::BTreeMap;

use super::label::LabelSet;
use crate::affect::UtteranceAffect;
use crate::error::{Error, Result};
use crate::stats::{normal_two_tailed, stars};
use crate::Execution;

/// Token counts per category plus the background used for the prior.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenStats {
    pub categories: Vec<String>,
    /// token → count in each category.
    pub counts: BTreeMap<String, Vec<u64>>,
    /// n_c: all tokens in each category.
    pub totals: Vec<u64>,
    /// y₀(w); the pooled category counts unless replaced.
    pub background: BTreeMap<String, u64>,
    /// n₀
    pub background_total: u64,
}

impl TokenStats {
    /// Builds stats from explicit counts; the background is the pooled counts.
    pub fn from_counts(categories: Vec<String>, counts: BTreeMap<String, Vec<u64>>) -> Result<Self> {
        let c = categories.len();
        if let Some((w, v)) = counts.iter().find(|(_, v)| v.len() != c) {
            return Err(Error::Numerical(format!(
                "token {w:?} has {} counts for {c} categories",
                v.len()
            )));
        }
        let mut totals = vec![0u64; c];
        let mut background = BTreeMap::new();
        for (w, v) in &counts {
            for (t, x) in totals.iter_mut().zip(v) {
                *t += x;
            }
            let s: u64 = v.iter().sum();
            if s > 0 {
                background.insert(w.clone(), s);
            }
        }
        let background_total = totals.iter().sum();
        Ok(TokenStats {
            categories,
            counts,
            totals,
            background,
            background_total,
        })
    }

    /// Word tokens of labeled utterances; unlabeled utterances contribute nothing.
    pub fn from_labels(affect: &[UtteranceAffect], labels: &LabelSet) -> Result<Self> {
        if affect.len() != labels.labels.len() {
            return Err(Error::Numerical(format!(
                "{} utterances but {} labels",
                affect.len(),
                labels.labels.len()
            )));
        }
        let categories: Vec<String> = labels.method.category_keys().iter().map(|s| s.to_string()).collect();
        let c = categories.len();
        let mut counts: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for (a, l) in affect.iter().zip(&labels.labels) {
            if a.utterance_id != l.utterance_id {
                return Err(Error::Numerical(format!(
                    "label order mismatch: {} vs {}",
                    a.utterance_id, l.utterance_id
                )));
            }
            let Some(cat) = l.label else { continue };
            for w in &a.words {
                counts.entry(w.clone()).or_insert_with(|| vec![0; c])[cat] += 1;
            }
        }
        Self::from_counts(categories, counts)
    }

    /// Replaces the pooled background with an external one.
    pub fn with_background(mut self, background: BTreeMap<String, u64>) -> Self {
        self.background_total = background.values().sum();
        self.background = background;
        self
    }

    pub fn category_index(&self, key: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogOddsEntry {
    pub token: String,
    pub category: String,
    pub delta: f64,
    pub variance: f64,
    pub z: f64,
    /// y_i(w)
    pub count: u64,
    /// Occurrences across all categories.
    pub corpus_count: u64,
}

impl LogOddsEntry {
    /// Two-tailed normal p-value of z.
    pub fn p(&self) -> f64 {
        normal_two_tailed(self.z)
    }

    pub fn stars(&self) -> &'static str {
        stars(self.p())
    }
}

/// δ and its approximate variance for one token, group i against group j.
pub fn log_odds_pair(y_i: f64, n_i: f64, y_j: f64, n_j: f64, alpha_w: f64, alpha0: f64) -> (f64, f64) {
    let a = y_i + alpha_w;
    let b = y_j + alpha_w;
    let delta = (a / (n_i + alpha0 - a)).ln() - (b / (n_j + alpha0 - b)).ln();
    (delta, 1.0 / a + 1.0 / b)
}

/// Log-odds of every token for `category` against the pooled other
/// categories, with prior α_w = alpha0·y₀(w)/n₀. Sorted by z descending,
/// then token.
pub fn log_odds_dirichlet(stats: &TokenStats, category: usize, alpha0: f64) -> Result<Vec<LogOddsEntry>> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::Config(format!("alpha0 must be positive and finite (got {alpha0})")));
    }
    if category >= stats.categories.len() {
        return Err(Error::Config(format!("no category with index {category}")));
    }
    let n_i = stats.totals[category] as f64;
    let n_j = (stats.totals.iter().sum::<u64>() - stats.totals[category]) as f64;
    let n0 = stats.background_total as f64;
    let mut out = Vec::with_capacity(stats.counts.len());
    for (token, counts) in &stats.counts {
        let corpus_count: u64 = counts.iter().sum();
        if corpus_count == 0 {
            continue;
        }
        let y0 = stats.background.get(token).copied().unwrap_or(0);
        if y0 == 0 {
            return Err(Error::Numerical(format!(
                "token {token:?} does not occur in the background, its prior is undefined"
            )));
        }
        let y_i = counts[category] as f64;
        let y_j = (corpus_count - counts[category]) as f64;
        let alpha_w = alpha0 * y0 as f64 / n0;
        let (delta, variance) = log_odds_pair(y_i, n_i, y_j, n_j, alpha_w, alpha0);
        out.push(LogOddsEntry {
            token: token.clone(),
            category: stats.categories[category].clone(),
            delta,
            variance,
            z: delta / variance.sqrt(),
            count: counts[category],
            corpus_count,
        });
    }
    sort_entries(&mut out);
    Ok(out)
}

fn sort_entries(entries: &mut [LogOddsEntry]) {
    entries.sort_by(|a, b| b.z.total_cmp(&a.z).then_with(|| a.token.cmp(&b.token)));
}

/// One entry list per category, computed independently.
pub fn log_odds_all(stats: &TokenStats, alpha0: f64, exec: Execution) -> Result<Vec<Vec<LogOddsEntry>>> {
    let idx: Vec<usize> = (0..stats.categories.len()).collect();
    exec.try_map(&idx, |&c| log_odds_dirichlet(stats, c, alpha0))
}

/// The k highest-z entries among tokens seen at least `min_count` times
/// across all categories; equal z is ordered by token.
pub fn top_k_correlates(entries: &[LogOddsEntry], k: usize, min_count: u64) -> Vec<LogOddsEntry> {
    let mut kept: Vec<LogOddsEntry> = entries.iter().filter(|e| e.corpus_count >= min_count).cloned().collect();
    sort_entries(&mut kept);
    kept.truncate(k);
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn toy() -> TokenStats {
        let counts = [("a", [5, 1]), ("b", [2, 2]), ("c", [0, 4]), ("d", [3, 3]), ("e", [1, 0])]
            .into_iter()
            .map(|(w, c)| (w.to_string(), c.to_vec()))
            .collect();
        TokenStats::from_counts(vec!["x".into(), "y".into()], counts).unwrap()
    }

    #[test]
    fn totals_and_background() {
        let s = toy();
        assert_eq!(s.totals, [11, 10]);
        assert_eq!(s.background_total, 21);
        assert_eq!(s.background["d"], 6);
    }

    #[test]
    fn balanced_token_has_zero_delta() {
        let counts = [("p", [2, 2]), ("q", [3, 3])]
            .into_iter()
            .map(|(w, c)| (w.to_string(), c.to_vec()))
            .collect();
        let s = TokenStats::from_counts(vec!["x".into(), "y".into()], counts).unwrap();
        for e in log_odds_dirichlet(&s, 0, 10.0).unwrap() {
            assert_abs_diff_eq!(e.delta, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn antisymmetric_in_two_categories() {
        let s = toy();
        let x = log_odds_dirichlet(&s, 0, 10.0).unwrap();
        let y = log_odds_dirichlet(&s, 1, 10.0).unwrap();
        for e in &x {
            let f = y.iter().find(|f| f.token == e.token).unwrap();
            assert_eq!(e.delta, -f.delta);
            assert_eq!(e.z, -f.z);
        }
    }

    #[test]
    fn missing_background_is_an_error() {
        let mut bg = toy().background;
        bg.remove("c");
        let s = toy().with_background(bg);
        assert!(log_odds_dirichlet(&s, 0, 10.0).is_err());
        assert!(log_odds_dirichlet(&toy(), 0, 0.0).is_err());
    }

    #[test]
    fn top_k_rules() {
        let all = log_odds_dirichlet(&toy(), 0, 10.0).unwrap();
        assert!(top_k_correlates(&all, 0, 0).is_empty());
        assert_eq!(top_k_correlates(&all, 99, 0).len(), 5);
        // "e" occurs once and is filtered out by a threshold of 3
        assert!(top_k_correlates(&all, 99, 3).iter().all(|e| e.token != "e"));
        let tied = vec![
            LogOddsEntry { token: "zz".into(), category: "x".into(), delta: 1.0, variance: 1.0, z: 1.0, count: 3, corpus_count: 3 },
            LogOddsEntry { token: "aa".into(), category: "x".into(), delta: 1.0, variance: 1.0, z: 1.0, count: 3, corpus_count: 3 },
        ];
        assert_eq!(top_k_correlates(&tied, 1, 3)[0].token, "aa");
    }
}
