use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affect::{utterance_affect, AffectCategory, ContextualScores, EmoticonConfig, Lexicon, Method, UtteranceAffect};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::Execution;

/// What to do when two or more categories share the top count.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "policy", content = "order")]
pub enum TiePolicy {
    /// The utterance becomes unlabeled.
    #[default]
    Drop,
    /// The tied category listed first wins. Keys not listed rank after the
    /// listed ones, in inventory order; an empty list means inventory order.
    Priority(Vec<String>),
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiePolicy::Drop => f.write_str("drop"),
            TiePolicy::Priority(order) if order.is_empty() => f.write_str("priority(inventory)"),
            TiePolicy::Priority(order) => write!(f, "priority({})", order.join(">")),
        }
    }
}

impl TiePolicy {
    fn rank(&self, keys: &[&str], i: usize) -> usize {
        match self {
            TiePolicy::Drop => i,
            TiePolicy::Priority(order) => order
                .iter()
                .position(|k| k.eq_ignore_ascii_case(keys[i]))
                .unwrap_or(order.len() + i),
        }
    }
}

/// Result of picking a label from per-category counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    None,
    Unique(usize),
    Tie(Option<usize>),
}

impl Vote {
    pub fn label(self) -> Option<usize> {
        match self {
            Vote::None => None,
            Vote::Unique(i) => Some(i),
            Vote::Tie(l) => l,
        }
    }
}

/// Category with the highest count, if any signal is present.
pub fn plurality(counts: &[u32], keys: &[&str], policy: &TiePolicy) -> Vote {
    let max = counts.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Vote::None;
    }
    let top: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == max).collect();
    if top.len() == 1 {
        Vote::Unique(top[0])
    } else {
        Vote::Tie(resolve_tie(&top, keys, policy))
    }
}

/// Chooses among tied category indices.
pub fn resolve_tie(tied: &[usize], keys: &[&str], policy: &TiePolicy) -> Option<usize> {
    match policy {
        TiePolicy::Drop => None,
        TiePolicy::Priority(_) => tied.iter().copied().min_by_key(|&i| policy.rank(keys, i)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledUtterance {
    pub utterance_id: String,
    pub method: Method,
    /// Index into `method.category_keys()`; `None` is unlabeled.
    pub label: Option<usize>,
    /// Classifier confidence of the chosen label (contextual method only).
    pub confidence: Option<f64>,
}

impl LabeledUtterance {
    pub fn label_key(&self) -> Option<&'static str> {
        self.label.map(|i| self.method.category_keys()[i])
    }
}

/// Labels for every utterance of a corpus under one method.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSet {
    pub method: Method,
    pub tie_policy: TiePolicy,
    pub labels: Vec<LabeledUtterance>,
    /// Utterances whose top count was shared by several categories.
    pub ties: usize,
}

impl LabelSet {
    pub fn unlabeled(&self) -> usize {
        self.labels.iter().filter(|l| l.label.is_none()).count()
    }

    /// Number of utterances per category, in inventory order.
    pub fn category_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.method.category_keys().len()];
        for l in self.labels.iter().filter_map(|l| l.label) {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Per-utterance counts and word tokens, in corpus order.
pub fn corpus_affect(corpus: &Corpus, emoticons: &EmoticonConfig, lexicon: &Lexicon, exec: Execution) -> Vec<UtteranceAffect> {
    let utterances: Vec<_> = corpus.utterances().collect();
    exec.map(&utterances, |(_, u)| utterance_affect(&u.utterance_id, &u.text, emoticons, lexicon))
}

/// Labels one utterance. Emoticon and lexicon use the plurality category;
/// contextual uses the classifier's argmax and leaves empty-flagged
/// utterances unlabeled. The `bool` reports a tie.
pub fn label_utterance(
    affect: &UtteranceAffect,
    method: Method,
    scores: Option<&ContextualScores>,
    policy: &TiePolicy,
) -> Result<(LabeledUtterance, bool)> {
    let keys = method.category_keys();
    let (label, confidence, tie) = match method {
        Method::Emoticon | Method::Lexicon => {
            let counts = if method == Method::Emoticon {
                &affect.emoticon_counts
            } else {
                &affect.lexicon_counts
            };
            let vote = plurality(counts, &keys, policy);
            (vote.label(), None, matches!(vote, Vote::Tie(_)))
        }
        Method::Contextual => {
            let scores = scores.ok_or_else(|| Error::Config("contextual labels need a score file".into()))?;
            let entry = scores.get(&affect.utterance_id).ok_or_else(|| {
                Error::invalid("contextual scores", "utterance_id", format!("no scores for {}", affect.utterance_id))
            })?;
            if entry.empty_flag {
                (None, None, false)
            } else {
                let (l, c) = entry.argmax();
                (Some(l.index()), Some(c), false)
            }
        }
    };
    Ok((
        LabeledUtterance {
            utterance_id: affect.utterance_id.clone(),
            method,
            label,
            confidence,
        },
        tie,
    ))
}

pub fn label_all(
    affect: &[UtteranceAffect],
    method: Method,
    scores: Option<&ContextualScores>,
    policy: &TiePolicy,
    exec: Execution,
) -> Result<LabelSet> {
    let labeled = exec.try_map(affect, |a| label_utterance(a, method, scores, policy))?;
    let ties = labeled.iter().filter(|(_, t)| *t).count();
    Ok(LabelSet {
        method,
        tie_policy: policy.clone(),
        labels: labeled.into_iter().map(|(l, _)| l).collect(),
        ties,
    })
}
