//! Utterance-level classifier scores produced by the scorer sidecar.
//!
//! Score file: one JSON object per line,
//!
//! ```text
//! {"utterance_id":"d1-0","scores":{"joy":0.91,"love":0.02,"sadness":0.01,
//!  "fear":0.01,"anger":0.03,"surprise":0.02},"model_id":"emotion-base-v1","empty_flag":false}
//! ```
//!
//! Scorer input file: one `{"utterance_id":..., "text":...}` object per line,
//! with emoticons already stripped from `text`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{strip_emoticons, AffectCategory, EmoticonConfig, EmotionLabel};
use crate::corpus::{Agent, Corpus, Dialogue};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireScores {
    joy: f64,
    love: f64,
    sadness: f64,
    fear: f64,
    anger: f64,
    surprise: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord {
    utterance_id: String,
    scores: WireScores,
    model_id: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    empty_flag: bool,
}

#[derive(Debug, Serialize)]
struct WireInput<'a> {
    utterance_id: &'a str,
    text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreEntry {
    /// Confidences in [`EmotionLabel::ALL`] order.
    pub scores: [f64; 6],
    pub model_id: String,
    /// Set for utterances with no text left after emoticon stripping.
    pub empty_flag: bool,
}

impl ScoreEntry {
    pub fn score(&self, label: EmotionLabel) -> f64 {
        self.scores[label.index()]
    }

    /// Highest-confidence label; exact ties go to the earlier label.
    pub fn argmax(&self) -> (EmotionLabel, f64) {
        let mut best = 0;
        for i in 1..6 {
            if self.scores[i] > self.scores[best] {
                best = i;
            }
        }
        (EmotionLabel::ALL[best], self.scores[best])
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContextualScores {
    entries: HashMap<String, ScoreEntry>,
}

impl ContextualScores {
    pub fn get(&self, utterance_id: &str) -> Option<&ScoreEntry> {
        self.entries.get(utterance_id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, utterance_id: impl Into<String>, entry: ScoreEntry) {
        self.entries.insert(utterance_id.into(), entry);
    }

    /// Ids of utterances that were zero-filled or flagged empty.
    pub fn flagged(&self) -> BTreeSet<&str> {
        self.entries
            .iter()
            .filter(|(_, e)| e.empty_flag)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn model_ids(&self) -> BTreeSet<&str> {
        self.entries.values().map(|e| e.model_id.as_str()).collect()
    }
}

fn list_ids(ids: &[&str]) -> String {
    const SHOWN: usize = 20;
    let mut s = ids.iter().take(SHOWN).copied().collect::<Vec<_>>().join(", ");
    if ids.len() > SHOWN {
        let _ = write!(s, " and {} more", ids.len() - SHOWN);
    }
    s
}

/// Parses a score file and checks it against `corpus`.
///
/// Utterances absent from the file are an error unless their text is empty
/// after emoticon stripping; those get an all-zero vector and the empty flag.
pub fn parse_contextual_scores(
    text: &str,
    origin: &str,
    corpus: &Corpus,
    emoticons: &EmoticonConfig,
) -> Result<ContextualScores> {
    let mut entries = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let loc = format!("{origin}:{}", i + 1);
        let rec: WireRecord =
            serde_json::from_str(line).map_err(|e| Error::schema(&loc, e.to_string()))?;
        let loc = format!("{loc} utterance {}", rec.utterance_id);
        let s = &rec.scores;
        let scores = [s.joy, s.love, s.sadness, s.fear, s.anger, s.surprise];
        for (label, v) in EmotionLabel::ALL.iter().zip(scores) {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(&loc, label.key(), format!("{v} is outside [0, 1]")));
            }
        }
        if rec.model_id.trim().is_empty() {
            return Err(Error::invalid(&loc, "model_id", "must not be empty"));
        }
        let entry = ScoreEntry {
            scores,
            model_id: rec.model_id,
            empty_flag: rec.empty_flag,
        };
        if entries.insert(rec.utterance_id.clone(), entry).is_some() {
            return Err(Error::invalid(&loc, "utterance_id", "scored twice"));
        }
    }

    let mut missing = Vec::new();
    let mut zero_filled = Vec::new();
    for (_, u) in corpus.utterances() {
        if entries.contains_key(&u.utterance_id) {
            continue;
        }
        if strip_emoticons(&u.text, emoticons).is_empty() {
            zero_filled.push(u.utterance_id.clone());
        } else {
            missing.push(u.utterance_id.as_str());
        }
    }
    if !missing.is_empty() {
        return Err(Error::invalid(
            origin,
            "utterance_id",
            format!("{} utterances have no scores: {}", missing.len(), list_ids(&missing)),
        ));
    }
    for id in zero_filled {
        entries.insert(
            id,
            ScoreEntry {
                scores: [0.0; 6],
                model_id: "zero-fill".into(),
                empty_flag: true,
            },
        );
    }
    Ok(ContextualScores { entries })
}

pub fn load_contextual_scores(
    path: impl AsRef<Path>,
    corpus: &Corpus,
    emoticons: &EmoticonConfig,
) -> Result<ContextualScores> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_contextual_scores(&text, &path.display().to_string(), corpus, emoticons)
}

/// Writes scores in file format, sorted by utterance id.
pub fn write_contextual_scores(scores: &ContextualScores, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut ids: Vec<_> = scores.entries.keys().collect();
    ids.sort();
    let mut out = String::new();
    for id in ids {
        let e = &scores.entries[id];
        let [joy, love, sadness, fear, anger, surprise] = e.scores;
        let rec = WireRecord {
            utterance_id: id.clone(),
            scores: WireScores {
                joy,
                love,
                sadness,
                fear,
                anger,
                surprise,
            },
            model_id: e.model_id.clone(),
            empty_flag: e.empty_flag,
        };
        out.push_str(&serde_json::to_string(&rec).expect("score records serialise"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes the sidecar input file: every utterance, emoticons stripped, in
/// corpus order. Utterances that strip to nothing are included with empty
/// text so the scorer can flag them.
pub fn write_scorer_input(
    corpus: &Corpus,
    emoticons: &EmoticonConfig,
    path: impl AsRef<Path>,
) -> Result<usize> {
    let path = path.as_ref();
    let mut out = String::new();
    let mut n = 0;
    for (_, u) in corpus.utterances() {
        let rec = WireInput {
            utterance_id: &u.utterance_id,
            text: strip_emoticons(&u.text, emoticons),
        };
        out.push_str(&serde_json::to_string(&rec).expect("input records serialise"));
        out.push('\n');
        n += 1;
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))?;
    Ok(n)
}

/// Per-label sums of one participant's utterance scores, in utterance order.
pub fn aggregate_contextual(
    scores: &ContextualScores,
    dialogue: &Dialogue,
    agent: Agent,
) -> Result<[f64; 6]> {
    let mut sums = [0.0; 6];
    for u in dialogue.utterances_by(agent) {
        let entry = scores.get(&u.utterance_id).ok_or_else(|| {
            Error::invalid(
                format!("dialogue {}", dialogue.dialogue_id),
                "utterance_id",
                format!("no scores for {}", u.utterance_id),
            )
        })?;
        for (s, v) in sums.iter_mut().zip(entry.scores) {
            *s += v;
        }
    }
    Ok(sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_canonical;

    fn corpus() -> Corpus {
        parse_canonical(
            r#"{"dialogue_id":"d","utterances":[{"id":"a","speaker":0,"text":"yes"},{"id":"b","speaker":0,"text":"sure"},{"id":"c","speaker":1,"text":":)"}],"participants":[{"participant_id":"p"},{"participant_id":"q"}]}"#,
            "mem",
        )
        .unwrap()
    }

    fn line(id: &str, joy: f64) -> String {
        format!(
            r#"{{"utterance_id":"{id}","scores":{{"joy":{joy},"love":0.0,"sadness":0.1,"fear":0.0,"anger":0.0,"surprise":0.0}},"model_id":"m"}}"#
        )
    }

    #[test]
    fn sums_joy_and_zero_fills_emoticon_only_utterances() {
        let c = corpus();
        let text = [line("a", 0.9), line("b", 0.8)].join("\n");
        let s = parse_contextual_scores(&text, "mem", &c, &EmoticonConfig::builtin()).unwrap();
        let sums = aggregate_contextual(&s, &c.dialogues[0], Agent::FIRST).unwrap();
        assert_eq!(sums[0], 0.9 + 0.8);
        assert_eq!(sums[2], 0.1 + 0.1);
        assert!(s.get("c").unwrap().empty_flag);
        assert_eq!(aggregate_contextual(&s, &c.dialogues[0], Agent::SECOND).unwrap(), [0.0; 6]);
    }

    #[test]
    fn out_of_range_value_is_named() {
        let c = corpus();
        let text = [line("a", 1.3), line("b", 0.8)].join("\n");
        let msg = parse_contextual_scores(&text, "mem", &c, &EmoticonConfig::builtin())
            .unwrap_err()
            .to_string();
        assert!(msg.contains("joy") && msg.contains("utterance a"), "{msg}");
    }

    #[test]
    fn missing_ids_are_listed() {
        let c = corpus();
        let msg = parse_contextual_scores(&line("a", 0.5), "mem", &c, &EmoticonConfig::builtin())
            .unwrap_err()
            .to_string();
        assert!(msg.contains("1 utterances have no scores: b"), "{msg}");
    }

    #[test]
    fn missing_label_is_a_schema_error() {
        let c = corpus();
        let text = r#"{"utterance_id":"a","scores":{"joy":0.5},"model_id":"m"}"#;
        assert!(matches!(
            parse_contextual_scores(text, "mem", &c, &EmoticonConfig::builtin()),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn argmax_prefers_earlier_label_on_ties() {
        let e = ScoreEntry {
            scores: [0.2, 0.4, 0.4, 0.0, 0.0, 0.0],
            model_id: "m".into(),
            empty_flag: false,
        };
        assert_eq!(e.argmax(), (EmotionLabel::Love, 0.4));
    }
}
