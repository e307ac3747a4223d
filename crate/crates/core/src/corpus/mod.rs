//! Dialogue and participant data model.
//!
//! A [`Corpus`] is immutable once ingested. Participant attributes carry
//! explicit missingness through [`Field`], so downstream listwise deletion
//! never has to guess whether a zero is a value or a hole.

mod canonical;
mod exclusion;
mod release;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canonical::{ingest_canonical, parse_canonical, to_canonical_string, write_canonical};
pub use exclusion::{
    apply_exclusions, Condition, ExclusionEntry, ExclusionPolicy, ExclusionReport, ExclusionRule,
};
pub use release::{ingest_release_adapter, parse_release};

/// Outcome questions as they were put to participants.
pub const SATISFACTION_QUESTION: &str = "How satisfied are you with the negotiation outcome?";
pub const LIKENESS_QUESTION: &str = "How much do you like your opponent?";

/// Tri-state value: observed, never observed, or removed by an exclusion rule.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Field<T> {
    Present(T),
    #[default]
    Missing,
    Excluded,
}

impl<T> Field<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Field::Present(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_present(&self) -> bool {
        matches!(self, Field::Present(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Field<U> {
        match self {
            Field::Present(v) => Field::Present(f(v)),
            Field::Missing => Field::Missing,
            Field::Excluded => Field::Excluded,
        }
    }

    pub fn as_ref(&self) -> Field<&T> {
        match self {
            Field::Present(v) => Field::Present(v),
            Field::Missing => Field::Missing,
            Field::Excluded => Field::Excluded,
        }
    }
}

impl<T> From<Option<T>> for Field<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Missing, Field::Present)
    }
}

/// Which of the two negotiators an utterance or record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Agent(u8);

impl Agent {
    pub const FIRST: Agent = Agent(0);
    pub const SECOND: Agent = Agent(1);
    pub const BOTH: [Agent; 2] = [Agent::FIRST, Agent::SECOND];

    pub fn new(index: i64) -> Option<Agent> {
        match index {
            0 => Some(Agent::FIRST),
            1 => Some(Agent::SECOND),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn partner(self) -> Agent {
        Agent(1 - self.0)
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A categorical variable with a fixed, ordered level inventory.
pub trait Categorical: Copy + Eq + 'static {
    const LEVELS: &'static [Self];
    fn label(self) -> &'static str;

    fn from_label(s: &str) -> Option<Self> {
        let s = s.trim();
        Self::LEVELS
            .iter()
            .copied()
            .find(|l| l.label().eq_ignore_ascii_case(s))
    }
}

macro_rules! categorical {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name { $($variant),+ }

        impl Categorical for $name {
            const LEVELS: &'static [Self] = &[$($name::$variant),+];
            fn label(self) -> &'static str {
                match self { $($name::$variant => $label),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }
    };
}

categorical!(Gender { Female => "Female", Male => "Male", Other => "Other" });

categorical!(Ethnicity {
    WhiteAmerican => "White American",
    NativeOrIslander => "Native or Islander",
    AsianAmerican => "Asian American",
    BlackOrAfricanAmerican => "Black or African American",
    HispanicOrLatino => "Hispanic or Latino",
    Other => "Other",
});

categorical!(
    /// Social value orientation.
    Svo { Prosocial => "Prosocial", Proself => "Proself", Unclassified => "Unclassified" }
);

categorical!(Issue { Food => "Food", Water => "Water", Firewood => "Firewood" });

categorical!(Priority { High => "High", Medium => "Medium", Low => "Low" });

/// Priority assigned to each issue, indexed by [`Issue`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Priorities([Priority; 3]);

impl Priorities {
    /// Fails unless the assignment is a bijection between issues and levels.
    pub fn new(food: Priority, water: Priority, firewood: Priority) -> Option<Self> {
        let p = [food, water, firewood];
        let distinct: HashSet<_> = p.iter().collect();
        (distinct.len() == 3).then_some(Priorities(p))
    }

    pub fn of(&self, issue: Issue) -> Priority {
        self.0[issue as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Big5 {
    pub extraversion: Field<f64>,
    pub agreeableness: Field<f64>,
    pub conscientiousness: Field<f64>,
    pub emotional_stability: Field<f64>,
    pub openness: Field<f64>,
}

/// Every participant attribute that analyses and exclusion rules can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Age,
    Education,
    Gender,
    Ethnicity,
    Svo,
    Extraversion,
    Agreeableness,
    Conscientiousness,
    EmotionalStability,
    Openness,
    Satisfaction,
    Likeness,
    Points,
}

impl Variable {
    pub const ALL: [Variable; 13] = [
        Variable::Age,
        Variable::Education,
        Variable::Gender,
        Variable::Ethnicity,
        Variable::Svo,
        Variable::Extraversion,
        Variable::Agreeableness,
        Variable::Conscientiousness,
        Variable::EmotionalStability,
        Variable::Openness,
        Variable::Satisfaction,
        Variable::Likeness,
        Variable::Points,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::Age => "age",
            Variable::Education => "education",
            Variable::Gender => "gender",
            Variable::Ethnicity => "ethnicity",
            Variable::Svo => "svo",
            Variable::Extraversion => "extraversion",
            Variable::Agreeableness => "agreeableness",
            Variable::Conscientiousness => "conscientiousness",
            Variable::EmotionalStability => "emotional_stability",
            Variable::Openness => "openness",
            Variable::Satisfaction => "satisfaction",
            Variable::Likeness => "likeness",
            Variable::Points => "points",
        }
    }

    pub fn from_name(name: &str) -> Option<Variable> {
        Variable::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn is_categorical(self) -> bool {
        matches!(self, Variable::Gender | Variable::Ethnicity | Variable::Svo)
    }

    /// Levels of a categorical variable, in declaration order.
    pub fn levels(self) -> &'static [&'static str] {
        match self {
            Variable::Gender => &["Female", "Male", "Other"],
            Variable::Ethnicity => &[
                "White American",
                "Native or Islander",
                "Asian American",
                "Black or African American",
                "Hispanic or Latino",
                "Other",
            ],
            Variable::Svo => &["Prosocial", "Proself", "Unclassified"],
            _ => &[],
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticipantRecord {
    pub participant_id: String,
    pub age: Field<u32>,
    pub education: Field<u8>,
    pub gender: Field<Gender>,
    pub ethnicity: Field<Ethnicity>,
    pub svo: Field<Svo>,
    pub big5: Big5,
    pub priorities: Option<Priorities>,
    pub satisfaction: Field<u8>,
    pub likeness: Field<u8>,
    /// Objective points scored, when the source provides them.
    pub points: Field<f64>,
}

impl ParticipantRecord {
    pub fn new(participant_id: impl Into<String>) -> Self {
        ParticipantRecord {
            participant_id: participant_id.into(),
            age: Field::Missing,
            education: Field::Missing,
            gender: Field::Missing,
            ethnicity: Field::Missing,
            svo: Field::Missing,
            big5: Big5::default(),
            priorities: None,
            satisfaction: Field::Missing,
            likeness: Field::Missing,
            points: Field::Missing,
        }
    }

    /// Numeric value of a continuous variable; `None` for categorical ones.
    pub fn numeric(&self, var: Variable) -> Option<Field<f64>> {
        Some(match var {
            Variable::Age => self.age.map(f64::from),
            Variable::Education => self.education.map(f64::from),
            Variable::Extraversion => self.big5.extraversion,
            Variable::Agreeableness => self.big5.agreeableness,
            Variable::Conscientiousness => self.big5.conscientiousness,
            Variable::EmotionalStability => self.big5.emotional_stability,
            Variable::Openness => self.big5.openness,
            Variable::Satisfaction => self.satisfaction.map(f64::from),
            Variable::Likeness => self.likeness.map(f64::from),
            Variable::Points => self.points,
            Variable::Gender | Variable::Ethnicity | Variable::Svo => return None,
        })
    }

    /// Level label of a categorical variable; `None` for continuous ones.
    pub fn level(&self, var: Variable) -> Option<Field<&'static str>> {
        Some(match var {
            Variable::Gender => self.gender.map(Gender::label),
            Variable::Ethnicity => self.ethnicity.map(Ethnicity::label),
            Variable::Svo => self.svo.map(Svo::label),
            _ => return None,
        })
    }

    /// Marks a present value as excluded. Returns whether anything changed.
    pub(crate) fn exclude(&mut self, var: Variable) -> bool {
        fn hit<T>(f: &mut Field<T>) -> bool {
            let was = f.is_present();
            if was {
                *f = Field::Excluded;
            }
            was
        }
        match var {
            Variable::Age => hit(&mut self.age),
            Variable::Education => hit(&mut self.education),
            Variable::Gender => hit(&mut self.gender),
            Variable::Ethnicity => hit(&mut self.ethnicity),
            Variable::Svo => hit(&mut self.svo),
            Variable::Extraversion => hit(&mut self.big5.extraversion),
            Variable::Agreeableness => hit(&mut self.big5.agreeableness),
            Variable::Conscientiousness => hit(&mut self.big5.conscientiousness),
            Variable::EmotionalStability => hit(&mut self.big5.emotional_stability),
            Variable::Openness => hit(&mut self.big5.openness),
            Variable::Satisfaction => hit(&mut self.satisfaction),
            Variable::Likeness => hit(&mut self.likeness),
            Variable::Points => hit(&mut self.points),
        }
    }

    /// Checks the record's range invariants.
    pub fn validate(&self, location: &str) -> Result<()> {
        if self.participant_id.trim().is_empty() {
            return Err(Error::invalid(location, "participant_id", "must not be empty"));
        }
        if let Field::Present(age) = self.age {
            if age == 0 {
                return Err(Error::invalid(location, "age", "must be a positive integer"));
            }
        }
        if let Field::Present(e) = self.education {
            if e > 8 {
                return Err(Error::invalid(location, "education", format!("{e} is outside 0..=8")));
            }
        }
        for (var, v) in [
            (Variable::Extraversion, self.big5.extraversion),
            (Variable::Agreeableness, self.big5.agreeableness),
            (Variable::Conscientiousness, self.big5.conscientiousness),
            (Variable::EmotionalStability, self.big5.emotional_stability),
            (Variable::Openness, self.big5.openness),
        ] {
            if let Field::Present(x) = v {
                if !(1.0..=7.0).contains(&x) {
                    return Err(Error::invalid(location, var.name(), format!("{x} is outside 1..=7")));
                }
            }
        }
        for (var, v) in [
            (Variable::Satisfaction, self.satisfaction),
            (Variable::Likeness, self.likeness),
        ] {
            if let Field::Present(x) = v {
                if !(1..=5).contains(&x) {
                    return Err(Error::invalid(location, var.name(), format!("{x} is outside 1..=5")));
                }
            }
        }
        if let Field::Present(p) = self.points {
            if !p.is_finite() {
                return Err(Error::invalid(location, "points", "must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    pub utterance_id: String,
    pub speaker: Agent,
    pub text: String,
    pub turn_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dialogue {
    pub dialogue_id: String,
    pub utterances: Vec<Utterance>,
    pub participants: [ParticipantRecord; 2],
}

impl Dialogue {
    pub fn participant(&self, agent: Agent) -> &ParticipantRecord {
        &self.participants[agent.index()]
    }

    pub fn utterances_by(&self, agent: Agent) -> impl Iterator<Item = &Utterance> {
        self.utterances.iter().filter(move |u| u.speaker == agent)
    }

    pub fn validate(&self, location: &str) -> Result<()> {
        if self.dialogue_id.trim().is_empty() {
            return Err(Error::invalid(location, "dialogue_id", "must not be empty"));
        }
        let mut ids = HashSet::new();
        for (i, u) in self.utterances.iter().enumerate() {
            let loc = format!("{location} utterance {i}");
            if u.turn_index != i {
                return Err(Error::invalid(
                    loc,
                    "turn_index",
                    format!("expected {i}, found {}", u.turn_index),
                ));
            }
            if u.utterance_id.trim().is_empty() {
                return Err(Error::invalid(loc, "id", "must not be empty"));
            }
            if !ids.insert(u.utterance_id.as_str()) {
                return Err(Error::invalid(loc, "id", format!("duplicate id {:?}", u.utterance_id)));
            }
            if u.text.trim().is_empty() {
                return Err(Error::invalid(loc, "text", "empty after trimming"));
            }
        }
        for agent in Agent::BOTH {
            self.participant(agent)
                .validate(&format!("{location} participant {agent}"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Canonical,
    Release,
    Synthetic,
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Canonical => "canonical",
            SourceFormat::Release => "release",
            SourceFormat::Synthetic => "synthetic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub source: SourceFormat,
    /// Seconds since the Unix epoch.
    pub ingested_at: u64,
    /// SHA-256 of the source bytes, hex encoded.
    pub source_sha256: String,
    pub satisfaction_question: &'static str,
    pub likeness_question: &'static str,
}

impl Provenance {
    pub fn new(source: SourceFormat, bytes: &[u8]) -> Self {
        use sha2::{Digest, Sha256};
        let ingested_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Provenance {
            source,
            ingested_at,
            source_sha256: hex::encode(Sha256::digest(bytes)),
            satisfaction_question: SATISFACTION_QUESTION,
            likeness_question: LIKENESS_QUESTION,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub dialogues: Vec<Dialogue>,
    pub provenance: Provenance,
}

/// Row counts of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSummary {
    pub dialogues: usize,
    pub utterances: usize,
    pub participant_rows: usize,
    pub distinct_participants: usize,
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} dialogues, {} utterances, {} participant rows ({} distinct participants)",
            self.dialogues, self.utterances, self.participant_rows, self.distinct_participants
        )
    }
}

impl Corpus {
    /// Validates every invariant and assembles a corpus.
    pub fn new(dialogues: Vec<Dialogue>, provenance: Provenance) -> Result<Corpus> {
        let mut seen = HashSet::new();
        let mut utterance_ids = HashSet::new();
        for d in &dialogues {
            let loc = format!("dialogue {}", d.dialogue_id);
            d.validate(&loc)?;
            if !seen.insert(d.dialogue_id.as_str()) {
                return Err(Error::invalid(loc, "dialogue_id", "duplicate dialogue id"));
            }
            for u in &d.utterances {
                if !utterance_ids.insert(u.utterance_id.as_str()) {
                    return Err(Error::invalid(
                        loc,
                        "id",
                        format!("utterance id {:?} is used by another dialogue", u.utterance_id),
                    ));
                }
            }
        }
        Ok(Corpus {
            dialogues,
            provenance,
        })
    }

    /// Same dialogues and same source bytes; ignores the ingestion time.
    pub fn same_content(&self, other: &Corpus) -> bool {
        self.dialogues == other.dialogues
            && self.provenance.source_sha256 == other.provenance.source_sha256
    }

    pub fn summary(&self) -> CorpusSummary {
        let distinct: HashSet<&str> = self
            .dialogues
            .iter()
            .flat_map(|d| d.participants.iter().map(|p| p.participant_id.as_str()))
            .collect();
        CorpusSummary {
            dialogues: self.dialogues.len(),
            utterances: self.dialogues.iter().map(|d| d.utterances.len()).sum(),
            participant_rows: self.dialogues.len() * 2,
            distinct_participants: distinct.len(),
        }
    }

    pub fn utterances(&self) -> impl Iterator<Item = (&Dialogue, &Utterance)> {
        self.dialogues
            .iter()
            .flat_map(|d| d.utterances.iter().map(move |u| (d, u)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str) -> ParticipantRecord {
        let mut p = ParticipantRecord::new(id);
        p.satisfaction = Field::Present(4);
        p.likeness = Field::Present(5);
        p
    }

    fn dialogue(id: &str) -> Dialogue {
        Dialogue {
            dialogue_id: id.into(),
            utterances: vec![Utterance {
                utterance_id: format!("{id}-0"),
                speaker: Agent::FIRST,
                text: "hi".into(),
                turn_index: 0,
            }],
            participants: [record("a"), record("b")],
        }
    }

    #[test]
    fn priorities_must_be_a_bijection() {
        assert!(Priorities::new(Priority::High, Priority::Medium, Priority::Low).is_some());
        assert!(Priorities::new(Priority::High, Priority::High, Priority::Low).is_none());
    }

    #[test]
    fn categorical_labels_parse_case_insensitively() {
        assert_eq!(Ethnicity::from_label("asian american"), Some(Ethnicity::AsianAmerican));
        assert_eq!(Svo::from_label(" Proself "), Some(Svo::Proself));
        assert_eq!(Gender::from_label("nonbinary"), None);
    }

    #[test]
    fn duplicate_dialogue_ids_rejected() {
        let mut second = dialogue("d1");
        second.utterances[0].utterance_id = "other".into();
        let err = Corpus::new(
            vec![dialogue("d1"), second],
            Provenance::new(SourceFormat::Synthetic, b""),
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate dialogue id"), "{err}");
    }

    #[test]
    fn out_of_range_likert_is_located() {
        let mut d = dialogue("d9");
        d.participants[1].satisfaction = Field::Present(6);
        let err = d.validate("dialogue d9").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("satisfaction") && msg.contains("participant 1"), "{msg}");
    }

    #[test]
    fn blank_text_rejected() {
        let mut d = dialogue("d2");
        d.utterances[0].text = "   ".into();
        assert!(d.validate("x").is_err());
    }

    #[test]
    fn exclude_only_touches_present_values() {
        let mut p = record("p");
        assert!(!p.exclude(Variable::Age));
        assert_eq!(p.age, Field::Missing);
        p.age = Field::Present(3);
        assert!(p.exclude(Variable::Age));
        assert_eq!(p.age, Field::Excluded);
    }
}
