//! Per-participant affect features.
//!
//! Three tiers, each a fixed-length vector per participant-in-dialogue:
//! emoticon counts (4), lexicon word counts (4) and summed classifier
//! confidences (6).

mod contextual;
mod emoticon;
mod lexicon;
mod tokenize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Agent, Corpus, Dialogue};
use crate::error::Result;
use crate::Execution;

pub use contextual::{
    aggregate_contextual, load_contextual_scores, parse_contextual_scores, write_contextual_scores,
    write_scorer_input, ContextualScores, ScoreEntry,
};
pub use emoticon::{count_emoticons, strip_emoticons, EmoticonConfig};
pub use lexicon::{count_lexicon, Lexicon};
pub use tokenize::{tokenize, Token, TokenKind};

/// A closed set of emotion categories used by one extraction method.
pub trait AffectCategory: Copy + Eq + Ord + fmt::Debug + Send + Sync + 'static {
    const ALL: &'static [Self];
    /// Human-readable name.
    fn name(self) -> &'static str;
    /// Lowercase key used in column names and config files.
    fn key(self) -> &'static str;

    fn index(self) -> usize {
        Self::ALL.iter().position(|c| *c == self).unwrap()
    }

    fn from_key(s: &str) -> Option<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        Self::ALL.iter().copied().find(|c| {
            let k: String = c.key().chars().filter(|c| c.is_alphanumeric()).collect();
            let n: String = c
                .name()
                .chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect();
            norm == k || norm == n
        })
    }
}

macro_rules! affect_category {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => ($label:literal, $key:literal)),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name { $($variant),+ }

        impl AffectCategory for $name {
            const ALL: &'static [Self] = &[$($name::$variant),+];
            fn name(self) -> &'static str {
                match self { $($name::$variant => $label),+ }
            }
            fn key(self) -> &'static str {
                match self { $($name::$variant => $key),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

affect_category!(
    /// Categories offered by the chat interface's emoticon shorthands.
    EmoticonCategory {
        Joy => ("Joy", "joy"),
        Sadness => ("Sadness", "sadness"),
        Anger => ("Anger", "anger"),
        Surprise => ("Surprise", "surprise"),
    }
);

affect_category!(
    LexiconCategory {
        PositiveEmotions => ("Positive Emotions", "positive"),
        Sadness => ("Sadness", "sadness"),
        Anger => ("Anger", "anger"),
        Anxiety => ("Anxiety", "anxiety"),
    }
);

affect_category!(
    /// Six-way label set of the utterance-level emotion classifier.
    EmotionLabel {
        Joy => ("Joy", "joy"),
        Love => ("Love", "love"),
        Sadness => ("Sadness", "sadness"),
        Fear => ("Fear", "fear"),
        Anger => ("Anger", "anger"),
        Surprise => ("Surprise", "surprise"),
    }
);

/// The three extraction methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Emoticon,
    Lexicon,
    Contextual,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Emoticon, Method::Lexicon, Method::Contextual];

    pub fn key(self) -> &'static str {
        match self {
            Method::Emoticon => "emoticon",
            Method::Lexicon => "lexicon",
            Method::Contextual => "contextual",
        }
    }

    pub fn from_key(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.key() == s)
    }

    /// Category keys of this method, in column order.
    pub fn category_keys(self) -> Vec<&'static str> {
        match self {
            Method::Emoticon => EmoticonCategory::ALL.iter().map(|c| c.key()).collect(),
            Method::Lexicon => LexiconCategory::ALL.iter().map(|c| c.key()).collect(),
            Method::Contextual => EmotionLabel::ALL.iter().map(|c| c.key()).collect(),
        }
    }

    /// Feature column names, e.g. `emoticon_joy`.
    pub fn columns(self) -> Vec<String> {
        self.category_keys()
            .into_iter()
            .map(|k| format!("{}_{k}", self.key()))
            .collect()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// All affect features of one participant in one dialogue.
#[derive(Debug, Clone, PartialEq)]
pub struct AffectProfile {
    pub dialogue_id: String,
    pub agent: Agent,
    pub participant_id: String,
    pub utterances: usize,
    pub emoticon_counts: [u32; 4],
    pub lexicon_counts: [u32; 4],
    /// `None` when no classifier scores were supplied.
    pub contextual_sums: Option<[f64; 6]>,
}

impl AffectProfile {
    /// Feature values of one method, in [`Method::columns`] order.
    pub fn features(&self, method: Method) -> Option<Vec<f64>> {
        match method {
            Method::Emoticon => Some(self.emoticon_counts.iter().map(|&c| c as f64).collect()),
            Method::Lexicon => Some(self.lexicon_counts.iter().map(|&c| c as f64).collect()),
            Method::Contextual => self.contextual_sums.map(|s| s.to_vec()),
        }
    }

    /// Looks up a feature column such as `lexicon_anger`.
    pub fn feature(&self, column: &str) -> Option<Option<f64>> {
        Method::ALL.into_iter().find_map(|m| {
            let i = m.columns().iter().position(|c| c == column)?;
            Some(self.features(m).map(|v| v[i]))
        })
    }
}

fn profile(
    dialogue: &Dialogue,
    agent: Agent,
    emoticons: &EmoticonConfig,
    lexicon: &Lexicon,
    scores: Option<&ContextualScores>,
) -> Result<AffectProfile> {
    Ok(AffectProfile {
        dialogue_id: dialogue.dialogue_id.clone(),
        agent,
        participant_id: dialogue.participant(agent).participant_id.clone(),
        utterances: dialogue.utterances_by(agent).count(),
        emoticon_counts: count_emoticons(dialogue, agent, emoticons),
        lexicon_counts: count_lexicon(dialogue, agent, lexicon, emoticons),
        contextual_sums: scores
            .map(|s| aggregate_contextual(s, dialogue, agent))
            .transpose()?,
    })
}

/// One profile per participant-in-dialogue, sorted by (dialogue_id, agent).
pub fn build_profiles(
    corpus: &Corpus,
    emoticons: &EmoticonConfig,
    lexicon: &Lexicon,
    scores: Option<&ContextualScores>,
    exec: Execution,
) -> Result<Vec<AffectProfile>> {
    let per_dialogue = exec.try_map(&corpus.dialogues, |d| {
        Agent::BOTH
            .iter()
            .map(|&a| profile(d, a, emoticons, lexicon, scores))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut profiles: Vec<AffectProfile> = per_dialogue.into_iter().flatten().collect();
    profiles.sort_by(|a, b| (&a.dialogue_id, a.agent).cmp(&(&b.dialogue_id, b.agent)));
    Ok(profiles)
}

/// Per-utterance signals shared by the labelling code.
#[derive(Debug, Clone, PartialEq)]
pub struct UtteranceAffect {
    pub utterance_id: String,
    pub emoticon_counts: [u32; 4],
    pub lexicon_counts: [u32; 4],
    /// Lowercased word tokens; emoticons and punctuation dropped.
    pub words: Vec<String>,
}

pub fn utterance_affect(
    utterance_id: &str,
    text: &str,
    emoticons: &EmoticonConfig,
    lexicon: &Lexicon,
) -> UtteranceAffect {
    let tokens = tokenize(text, Some(emoticons));
    let mut emoticon_counts = [0u32; 4];
    for t in &tokens {
        if let TokenKind::Emoticon(c) = t.kind {
            emoticon_counts[c.index()] += 1;
        }
    }
    UtteranceAffect {
        utterance_id: utterance_id.to_string(),
        emoticon_counts,
        lexicon_counts: lexicon.count_tokens(&tokens),
        words: tokens
            .into_iter()
            .filter(|t| t.kind == TokenKind::Word)
            .map(|t| t.text)
            .collect(),
    }
}
