//! Adapter for the public dataset release (a single JSON array).
//!
//! Each array element looks like
//!
//! ```text
//! { "dialogue_id": 0,
//!   "chat_logs": [ {"id": "mturk_agent_1", "text": "...", "task_data": {}}, ... ],
//!   "participant_info": { "mturk_agent_1": {...}, "mturk_agent_2": {...} },
//!   "annotations": [...] }
//! ```
//!
//! `mturk_agent_1` becomes agent 0 and `mturk_agent_2` agent 1. Deal actions
//! (`Submit-Deal`, `Accept-Deal`, `Reject-Deal`, `Walk-Away`) and blank chat
//! lines are not utterances and are skipped. Utterance ids are
//! `<dialogue_id>-<position in chat_logs>`. See `docs/release-adapter.md` for
//! the full mapping of survey answers.

use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use super::{
    Agent, Big5, Categorical, Corpus, Dialogue, Ethnicity, Field, Gender, Issue,
    ParticipantRecord, Priorities, Priority, Provenance, SourceFormat, Svo, Utterance,
};
use crate::error::{Error, Result};

const AGENT_KEYS: [&str; 2] = ["mturk_agent_1", "mturk_agent_2"];
const DEAL_ACTIONS: [&str; 4] = ["Submit-Deal", "Accept-Deal", "Reject-Deal", "Walk-Away"];

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], loc: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::schema(loc, format!("unrecognized key {k:?}"))),
        None => Ok(()),
    }
}

fn object<'a>(v: &'a Value, loc: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(loc, "expected a JSON object"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, loc: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(loc, format!("missing key {key:?}")))
}

fn text_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn is_blank(v: Option<&Value>) -> bool {
    match v {
        None | Some(Value::Null) => true,
        Some(Value::String(s)) => s.trim().is_empty(),
        _ => false,
    }
}

fn likert(v: Option<&Value>, scale: &[&str; 5], loc: &str, field: &str) -> Result<Field<u8>> {
    if is_blank(v) {
        return Ok(Field::Missing);
    }
    let v = v.unwrap();
    if let Some(n) = v.as_i64() {
        return u8::try_from(n)
            .map(Field::Present)
            .map_err(|_| Error::invalid(loc, field, format!("{n} is out of range")));
    }
    let s = text_of(v).unwrap_or_default().to_lowercase();
    scale
        .iter()
        .position(|l| *l == s)
        .map(|i| Field::Present(i as u8 + 1))
        .ok_or_else(|| Error::invalid(loc, field, format!("unrecognized answer {v}")))
}

const SATISFACTION_SCALE: [&str; 5] = [
    "extremely dissatisfied",
    "slightly dissatisfied",
    "undecided",
    "slightly satisfied",
    "extremely satisfied",
];

const LIKENESS_SCALE: [&str; 5] = [
    "extremely dislike",
    "slightly dislike",
    "undecided",
    "slightly like",
    "extremely like",
];

/// Highest education level, coded 0 (no schooling) to 8 (doctorate or
/// professional degree). Rules are checked in order; the first hit wins.
pub(crate) fn education_level(answer: &str) -> Option<u8> {
    let s = answer.trim().to_lowercase();
    if let Ok(n) = s.parse::<u8>() {
        return (n <= 8).then_some(n);
    }
    const RULES: &[(&[&str], u8)] = &[
        (&["doctor", "phd", "ph.d", "professional degree"], 8),
        (&["master"], 7),
        (&["some graduate", "some postgraduate", "graduate school"], 6),
        (&["4 year", "four year", "bachelor"], 5),
        (&["2 year", "two year", "associate"], 4),
        (&["some college", "college"], 3),
        (&["less than high school", "no schooling", "no formal"], 0),
        (&["some high school"], 1),
        (&["high school", "ged"], 2),
    ];
    RULES
        .iter()
        .find(|(needles, _)| needles.iter().any(|n| s.contains(n)))
        .map(|&(_, level)| level)
}

pub(crate) fn ethnicity_level(answer: &str) -> Option<Ethnicity> {
    let s = answer.trim().to_lowercase();
    if let Some(e) = Ethnicity::from_label(&s) {
        return Some(e);
    }
    const RULES: &[(&[&str], Ethnicity)] = &[
        (&["white", "caucasian"], Ethnicity::WhiteAmerican),
        (&["asian"], Ethnicity::AsianAmerican),
        (&["black", "african"], Ethnicity::BlackOrAfricanAmerican),
        (&["hispanic", "latino", "latina", "latinx"], Ethnicity::HispanicOrLatino),
        (
            &["native", "islander", "indian", "alaska", "hawaiian"],
            Ethnicity::NativeOrIslander,
        ),
        (&["other", "multi", "mixed"], Ethnicity::Other),
    ];
    RULES
        .iter()
        .find(|(needles, _)| needles.iter().any(|n| s.contains(n)))
        .map(|&(_, e)| e)
}

fn categorical<T: Categorical>(
    v: Option<&Value>,
    parse: impl Fn(&str) -> Option<T>,
    loc: &str,
    field: &str,
) -> Result<Field<T>> {
    if is_blank(v) {
        return Ok(Field::Missing);
    }
    let raw = text_of(v.unwrap()).unwrap_or_default();
    parse(&raw)
        .map(Field::Present)
        .ok_or_else(|| Error::invalid(loc, field, format!("unrecognized value {raw:?}")))
}

fn number(v: Option<&Value>, loc: &str, field: &str) -> Result<Option<f64>> {
    if is_blank(v) {
        return Ok(None);
    }
    let v = v.unwrap();
    v.as_f64()
        .or_else(|| v.as_str().and_then(|s| s.trim().parse().ok()))
        .map(Some)
        .ok_or_else(|| Error::invalid(loc, field, format!("expected a number, found {v}")))
}

fn participant(info: &Value, id: String, loc: &str) -> Result<ParticipantRecord> {
    let info = object(info, loc)?;
    check_keys(
        info,
        &["value2issue", "value2reason", "outcomes", "demographics", "personality"],
        loc,
    )?;
    let mut p = ParticipantRecord::new(id);

    if let Some(demo) = info.get("demographics") {
        let demo = object(demo, &format!("{loc}.demographics"))?;
        check_keys(demo, &["age", "gender", "ethnicity", "education"], &format!("{loc}.demographics"))?;
        p.age = match number(demo.get("age"), loc, "age")? {
            None => Field::Missing,
            Some(a) if a >= 1.0 && a.fract() == 0.0 && a <= u32::MAX as f64 => Field::Present(a as u32),
            Some(a) => return Err(Error::invalid(loc, "age", format!("{a} is not a positive integer"))),
        };
        p.gender = categorical(demo.get("gender"), Gender::from_label, loc, "gender")?;
        p.ethnicity = categorical(demo.get("ethnicity"), ethnicity_level, loc, "ethnicity")?;
        p.education = if is_blank(demo.get("education")) {
            Field::Missing
        } else {
            let raw = text_of(&demo["education"]).unwrap_or_default();
            Field::Present(education_level(&raw).ok_or_else(|| {
                Error::invalid(loc, "education", format!("unrecognized value {raw:?}"))
            })?)
        };
    }

    if let Some(pers) = info.get("personality") {
        let ploc = format!("{loc}.personality");
        let pers = object(pers, &ploc)?;
        check_keys(pers, &["svo", "big-five"], &ploc)?;
        p.svo = categorical(pers.get("svo"), Svo::from_label, loc, "svo")?;
        if let Some(b5) = pers.get("big-five") {
            let bloc = format!("{ploc}.big-five");
            let b5 = object(b5, &bloc)?;
            const KEYS: [&str; 5] = [
                "extraversion",
                "agreeableness",
                "conscientiousness",
                "emotional-stability",
                "openness-to-experiences",
            ];
            check_keys(b5, &KEYS, &bloc)?;
            let trait_of = |k: &str| number(b5.get(k), loc, k).map(Field::from);
            p.big5 = Big5 {
                extraversion: trait_of(KEYS[0])?,
                agreeableness: trait_of(KEYS[1])?,
                conscientiousness: trait_of(KEYS[2])?,
                emotional_stability: trait_of(KEYS[3])?,
                openness: trait_of(KEYS[4])?,
            };
        }
    }

    if let Some(out) = info.get("outcomes") {
        let oloc = format!("{loc}.outcomes");
        let out = object(out, &oloc)?;
        check_keys(out, &["points_scored", "satisfaction", "opponent_likeness"], &oloc)?;
        p.satisfaction = likert(out.get("satisfaction"), &SATISFACTION_SCALE, loc, "satisfaction")?;
        p.likeness = likert(out.get("opponent_likeness"), &LIKENESS_SCALE, loc, "likeness")?;
        p.points = number(out.get("points_scored"), loc, "points")?.into();
    }

    if let Some(v2i) = info.get("value2issue") {
        let vloc = format!("{loc}.value2issue");
        let v2i = object(v2i, &vloc)?;
        check_keys(v2i, &["High", "Medium", "Low"], &vloc)?;
        let mut by_issue: [Option<Priority>; 3] = [None; 3];
        for (level_key, issue) in v2i {
            let level = Priority::from_label(level_key).unwrap();
            let issue_name = text_of(issue).unwrap_or_default();
            let issue = Issue::from_label(&issue_name).ok_or_else(|| {
                Error::invalid(&vloc, level_key.as_str(), format!("unknown issue {issue_name:?}"))
            })?;
            by_issue[issue as usize] = Some(level);
        }
        p.priorities = match by_issue {
            [Some(f), Some(w), Some(fw)] => Priorities::new(f, w, fw),
            _ => None,
        };
        if p.priorities.is_none() {
            return Err(Error::invalid(loc, "priorities", "value2issue is not a bijection"));
        }
    }

    p.validate(loc)?;
    Ok(p)
}

fn dialogue(v: &Value, index: usize, origin: &str) -> Result<(Dialogue, usize)> {
    let loc = format!("{origin}[{index}]");
    let obj = object(v, &loc)?;
    check_keys(
        obj,
        &["dialogue_id", "chat_logs", "participant_info", "annotations"],
        &loc,
    )?;
    let dialogue_id = text_of(get(obj, "dialogue_id", &loc)?)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::schema(&loc, "dialogue_id must be a string or number"))?;
    let loc = format!("{loc} dialogue {dialogue_id}");

    let info = object(get(obj, "participant_info", &loc)?, &loc)?;
    check_keys(info, &AGENT_KEYS, &format!("{loc}.participant_info"))?;
    let mut records = Vec::with_capacity(2);
    for key in AGENT_KEYS {
        let ploc = format!("{loc}.participant_info.{key}");
        records.push(participant(
            get(info, key, &ploc)?,
            format!("{dialogue_id}:{key}"),
            &ploc,
        )?);
    }

    let logs = get(obj, "chat_logs", &loc)?
        .as_array()
        .ok_or_else(|| Error::schema(&loc, "chat_logs must be an array"))?;
    let mut utterances = Vec::new();
    let mut skipped = 0;
    for (pos, entry) in logs.iter().enumerate() {
        let eloc = format!("{loc}.chat_logs[{pos}]");
        let entry = object(entry, &eloc)?;
        check_keys(entry, &["id", "text", "task_data"], &eloc)?;
        let speaker_key = get(entry, "id", &eloc)?.as_str().unwrap_or_default();
        let speaker = AGENT_KEYS
            .iter()
            .position(|k| *k == speaker_key)
            .and_then(|i| Agent::new(i as i64))
            .ok_or_else(|| Error::invalid(&eloc, "id", format!("unknown speaker {speaker_key:?}")))?;
        let text = get(entry, "text", &eloc)?
            .as_str()
            .ok_or_else(|| Error::schema(&eloc, "text must be a string"))?;
        if DEAL_ACTIONS.contains(&text.trim()) || text.trim().is_empty() {
            skipped += 1;
            continue;
        }
        utterances.push(Utterance {
            utterance_id: format!("{dialogue_id}-{pos}"),
            speaker,
            text: text.to_string(),
            turn_index: utterances.len(),
        });
    }

    let [a, b]: [ParticipantRecord; 2] = records.try_into().expect("two agent keys");
    Ok((
        Dialogue {
            dialogue_id,
            utterances,
            participants: [a, b],
        },
        skipped,
    ))
}

/// Parses the release JSON array. Returns the corpus and the number of chat
/// log entries that were not utterances (deal actions, blank lines).
pub fn parse_release(text: &str, origin: &str) -> Result<(Corpus, usize)> {
    if text.trim().is_empty() {
        return Err(Error::schema(origin, "file is empty"));
    }
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::schema(origin, format!("malformed JSON: {e}")))?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::schema(origin, "expected a top-level JSON array"))?;
    if items.is_empty() {
        return Err(Error::schema(origin, "release file contains no dialogues"));
    }
    let mut dialogues = Vec::with_capacity(items.len());
    let mut skipped = 0;
    for (i, item) in items.iter().enumerate() {
        let (d, s) = dialogue(item, i, origin)?;
        dialogues.push(d);
        skipped += s;
    }
    let corpus = Corpus::new(dialogues, Provenance::new(SourceFormat::Release, text.as_bytes()))?;
    Ok((corpus, skipped))
}

pub fn ingest_release_adapter(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_release(&text, &path.display().to_string()).map(|(c, _)| c)
}
