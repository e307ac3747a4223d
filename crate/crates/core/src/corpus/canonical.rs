//! Line-delimited JSON interchange format.
//!
//! One dialogue per line:
//!
//! ```text
//! {"dialogue_id":"d1","utterances":[{"id":"d1-0","speaker":0,"text":"Hi :)"}],
//!  "participants":[{"participant_id":"p1","satisfaction":5,...},{...}]}
//! ```
//!
//! Participant attributes other than `participant_id` may be omitted; an
//! omitted attribute becomes [`Field::Missing`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    Agent, Big5, Categorical, Corpus, Dialogue, Ethnicity, Field, Gender, ParticipantRecord,
    Priorities, Priority, Provenance, SourceFormat, Svo, Utterance,
};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireDialogue {
    dialogue_id: String,
    utterances: Vec<WireUtterance>,
    participants: Vec<WireParticipant>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireUtterance {
    id: String,
    speaker: i64,
    text: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireParticipant {
    participant_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    age: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    education: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gender: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ethnicity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    svo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    big5: Option<WireBig5>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priorities: Option<WirePriorities>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    satisfaction: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    likeness: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireBig5 {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extraversion: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    agreeableness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conscientiousness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    emotional_stability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    openness: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePriorities {
    food: String,
    water: String,
    firewood: String,
}

fn category<T: Categorical>(raw: Option<String>, loc: &str, field: &str) -> Result<Field<T>> {
    match raw {
        None => Ok(Field::Missing),
        Some(s) => T::from_label(&s).map(Field::Present).ok_or_else(|| {
            let levels: Vec<_> = T::LEVELS.iter().map(|l| l.label()).collect();
            Error::invalid(loc, field, format!("{s:?} is not one of {levels:?}"))
        }),
    }
}

fn bounded<T: TryFrom<i64>>(raw: Option<i64>, loc: &str, field: &str) -> Result<Field<T>> {
    match raw {
        None => Ok(Field::Missing),
        Some(v) => T::try_from(v)
            .map(Field::Present)
            .map_err(|_| Error::invalid(loc, field, format!("{v} is out of range"))),
    }
}

impl WireParticipant {
    fn into_record(self, loc: &str) -> Result<ParticipantRecord> {
        let big5 = self.big5.unwrap_or_default();
        let priorities = match self.priorities {
            None => None,
            Some(p) => {
                let level = |s: &str, issue: &str| {
                    Priority::from_label(s).ok_or_else(|| {
                        Error::invalid(loc, format!("priorities.{issue}"), format!("{s:?} is not High/Medium/Low"))
                    })
                };
                let food = level(&p.food, "food")?;
                let water = level(&p.water, "water")?;
                let firewood = level(&p.firewood, "firewood")?;
                Some(Priorities::new(food, water, firewood).ok_or_else(|| {
                    Error::invalid(loc, "priorities", "must assign High, Medium and Low exactly once")
                })?)
            }
        };
        let record = ParticipantRecord {
            participant_id: self.participant_id,
            age: bounded(self.age, loc, "age")?,
            education: bounded(self.education, loc, "education")?,
            gender: category::<Gender>(self.gender, loc, "gender")?,
            ethnicity: category::<Ethnicity>(self.ethnicity, loc, "ethnicity")?,
            svo: category::<Svo>(self.svo, loc, "svo")?,
            big5: Big5 {
                extraversion: big5.extraversion.into(),
                agreeableness: big5.agreeableness.into(),
                conscientiousness: big5.conscientiousness.into(),
                emotional_stability: big5.emotional_stability.into(),
                openness: big5.openness.into(),
            },
            priorities,
            satisfaction: bounded(self.satisfaction, loc, "satisfaction")?,
            likeness: bounded(self.likeness, loc, "likeness")?,
            points: self.points.into(),
        };
        record.validate(loc)?;
        Ok(record)
    }

    fn from_record(p: &ParticipantRecord) -> Self {
        let b = &p.big5;
        let big5 = WireBig5 {
            extraversion: b.extraversion.value().copied(),
            agreeableness: b.agreeableness.value().copied(),
            conscientiousness: b.conscientiousness.value().copied(),
            emotional_stability: b.emotional_stability.value().copied(),
            openness: b.openness.value().copied(),
        };
        let any_big5 = [
            big5.extraversion,
            big5.agreeableness,
            big5.conscientiousness,
            big5.emotional_stability,
            big5.openness,
        ]
        .iter()
        .any(Option::is_some);
        WireParticipant {
            participant_id: p.participant_id.clone(),
            age: p.age.value().map(|&a| a.into()),
            education: p.education.value().map(|&e| e.into()),
            gender: p.gender.value().map(|g| g.label().to_string()),
            ethnicity: p.ethnicity.value().map(|e| e.label().to_string()),
            svo: p.svo.value().map(|s| s.label().to_string()),
            big5: any_big5.then_some(big5),
            priorities: p.priorities.map(|pr| {
                use super::Issue::*;
                WirePriorities {
                    food: pr.of(Food).label().into(),
                    water: pr.of(Water).label().into(),
                    firewood: pr.of(Firewood).label().into(),
                }
            }),
            satisfaction: p.satisfaction.value().map(|&s| s.into()),
            likeness: p.likeness.value().map(|&s| s.into()),
            points: p.points.value().copied(),
        }
    }
}

fn dialogue_from_line(line: &str, loc: &str) -> Result<Dialogue> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| Error::schema(loc, format!("malformed JSON: {e}")))?;
    let id_hint = value
        .get("dialogue_id")
        .and_then(|v| v.as_str())
        .map(|s| format!("{loc} (dialogue {s})"))
        .unwrap_or_else(|| loc.to_string());
    let wire: WireDialogue =
        serde_json::from_value(value).map_err(|e| Error::schema(&id_hint, e.to_string()))?;
    let loc = format!("{loc} dialogue {}", wire.dialogue_id);

    if wire.participants.len() != 2 {
        return Err(Error::invalid(
            &loc,
            "participants",
            format!("expected exactly 2, found {}", wire.participants.len()),
        ));
    }
    let mut utterances = Vec::with_capacity(wire.utterances.len());
    for (turn_index, u) in wire.utterances.into_iter().enumerate() {
        let speaker = Agent::new(u.speaker).ok_or_else(|| {
            Error::invalid(
                format!("{loc} utterance {}", u.id),
                "speaker",
                format!("{} is not 0 or 1", u.speaker),
            )
        })?;
        utterances.push(Utterance {
            utterance_id: u.id,
            speaker,
            text: u.text,
            turn_index,
        });
    }
    let mut participants = wire.participants.into_iter();
    let first = participants
        .next()
        .unwrap()
        .into_record(&format!("{loc} participant 0"))?;
    let second = participants
        .next()
        .unwrap()
        .into_record(&format!("{loc} participant 1"))?;
    let dialogue = Dialogue {
        dialogue_id: wire.dialogue_id,
        utterances,
        participants: [first, second],
    };
    dialogue.validate(&loc)?;
    Ok(dialogue)
}

/// Parses canonical JSONL text. `origin` names the source in error messages.
pub fn parse_canonical(text: &str, origin: &str) -> Result<Corpus> {
    let mut dialogues = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        dialogues.push(dialogue_from_line(line, &format!("{origin}:{}", i + 1))?);
    }
    Corpus::new(dialogues, Provenance::new(SourceFormat::Canonical, text.as_bytes()))
}

pub fn ingest_canonical(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_canonical(&text, &path.display().to_string())
}

/// Serialises a corpus as canonical JSONL. Excluded values are written as
/// omitted, i.e. they come back as missing.
pub fn to_canonical_string(corpus: &Corpus) -> String {
    let mut out = String::new();
    for d in &corpus.dialogues {
        let wire = WireDialogue {
            dialogue_id: d.dialogue_id.clone(),
            utterances: d
                .utterances
                .iter()
                .map(|u| WireUtterance {
                    id: u.utterance_id.clone(),
                    speaker: u.speaker.index() as i64,
                    text: u.text.clone(),
                })
                .collect(),
            participants: d.participants.iter().map(WireParticipant::from_record).collect(),
        };
        out.push_str(&serde_json::to_string(&wire).expect("wire types always serialise"));
        out.push('\n');
    }
    out
}

pub fn write_canonical(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_canonical_string(corpus)).map_err(|e| Error::io(path, e))
}
