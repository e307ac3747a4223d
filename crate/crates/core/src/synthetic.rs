//! Seeded synthetic corpora with the shape of the public negotiation data.
//!
//! Every draw comes from a ChaCha stream seeded by [`SyntheticSpec::seed`],
//! so a spec always yields the same corpus and scores. Outcomes depend
//! weakly on the generated affect, giving regressions something to find.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affect::{strip_emoticons, AffectCategory, ContextualScores, EmoticonConfig, EmotionLabel, ScoreEntry};
use crate::corpus::{
    Agent, Big5, Categorical, Corpus, Dialogue, Ethnicity, Field, Gender, ParticipantRecord, Priorities, Priority,
    Provenance, SourceFormat, Svo, Utterance,
};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub dialogues: usize,
    pub seed: u64,
    /// Participant rows given exactly one value that the sparse-levels
    /// exclusion policy removes (age ≤ 17, gender Other or SVO Unclassified).
    pub excluded_rows: usize,
    pub min_turns: usize,
    pub max_turns: usize,
}

impl SyntheticSpec {
    /// 1030 dialogues; 48 of the 2060 rows carry an excluded value, leaving 2012.
    pub fn full() -> Self {
        SyntheticSpec {
            dialogues: 1030,
            seed: 20_211_002,
            excluded_rows: 48,
            min_turns: 8,
            max_turns: 14,
        }
    }

    pub fn small(dialogues: usize, seed: u64) -> Self {
        SyntheticSpec {
            dialogues,
            seed,
            excluded_rows: 0,
            min_turns: 4,
            max_turns: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub corpus: Corpus,
    pub scores: ContextualScores,
}

/// Phrases with the emotion they loosely express.
const PHRASES: &[(&str, Option<EmotionLabel>)] = &[
    ("hello there, how are you doing", None),
    ("i need more water for the hike", None),
    ("could i get two packages of food", None),
    ("firewood matters most to me", None),
    ("what do you need most for your trip", None),
    ("we are camping with the kids this weekend", None),
    ("how about i take the water and you take the firewood", None),
    ("that sounds good to me", Some(EmotionLabel::Joy)),
    ("thank you so much, that is great", Some(EmotionLabel::Joy)),
    ("awesome, i hope you have a nice trip", Some(EmotionLabel::Joy)),
    ("i love that idea, you are very kind", Some(EmotionLabel::Love)),
    ("i am sorry but i cannot do that", Some(EmotionLabel::Sadness)),
    ("unfortunately my family is low on food", Some(EmotionLabel::Sadness)),
    ("i feel alone out here without supplies", Some(EmotionLabel::Sadness)),
    ("i am worried we will run out of water", Some(EmotionLabel::Fear)),
    ("i am afraid it gets cold at night", Some(EmotionLabel::Fear)),
    ("that is unfair and selfish of you", Some(EmotionLabel::Anger)),
    ("you are being greedy, i hate this deal", Some(EmotionLabel::Anger)),
    ("wow, really? i did not expect that", Some(EmotionLabel::Surprise)),
];

const EMOTICONS: &[&str] = &[":)", "🙂", ":(", "☹️", ">:(", "😡", ":o", "😮"];

struct Draw {
    text: String,
    tone: Option<EmotionLabel>,
}

fn utterance(rng: &mut ChaCha8Rng, mood: f64) -> Draw {
    let n = rng.gen_range(1..=2);
    let mut parts = Vec::with_capacity(3);
    let mut tone = None;
    for _ in 0..n {
        // Negative moods lean towards the negative phrases.
        let idx = if rng.gen_bool(0.35) {
            let start = if mood < 0.0 { 11 } else { 7 };
            rng.gen_range(start..PHRASES.len())
        } else {
            rng.gen_range(0..PHRASES.len())
        };
        let (p, t) = PHRASES[idx];
        parts.push(p.to_string());
        tone = tone.or(t);
    }
    if rng.gen_bool(0.12) {
        parts.push(EMOTICONS.choose(rng).unwrap().to_string());
    }
    Draw {
        text: parts.join(" "),
        tone,
    }
}

fn scores_for(rng: &mut ChaCha8Rng, tone: Option<EmotionLabel>) -> [f64; 6] {
    let mut raw = [0.0; 6];
    for r in &mut raw {
        *r = rng.gen_range(0.01..1.0f64).powi(3);
    }
    let t = tone.unwrap_or_else(|| *EmotionLabel::ALL.choose(rng).unwrap());
    raw[t.index()] += rng.gen_range(1.0..4.0);
    let s: f64 = raw.iter().sum();
    raw.map(|r| r / s)
}

fn participant(rng: &mut ChaCha8Rng, id: String, excluded: Option<u8>) -> ParticipantRecord {
    let mut p = ParticipantRecord::new(id);
    p.age = Field::Present(rng.gen_range(19..70));
    p.education = Field::Present(rng.gen_range(2..=8));
    p.gender = Field::Present(if rng.gen_bool(0.55) { Gender::Female } else { Gender::Male });
    let eth_weights = [0.6, 0.04, 0.1, 0.12, 0.08, 0.06];
    let mut u: f64 = rng.gen();
    let mut eth = Ethnicity::LEVELS[5];
    for (lvl, w) in Ethnicity::LEVELS.iter().zip(eth_weights) {
        if u < w {
            eth = *lvl;
            break;
        }
        u -= w;
    }
    p.ethnicity = Field::Present(eth);
    p.svo = Field::Present(if rng.gen_bool(0.6) { Svo::Prosocial } else { Svo::Proself });
    let mut trait_score = || Field::Present((rng.gen_range(2.0..7.0f64) * 2.0).round() / 2.0);
    p.big5 = Big5 {
        extraversion: trait_score(),
        agreeableness: trait_score(),
        conscientiousness: trait_score(),
        emotional_stability: trait_score(),
        openness: trait_score(),
    };
    let mut order = [Priority::High, Priority::Medium, Priority::Low];
    order.shuffle(rng);
    p.priorities = Priorities::new(order[0], order[1], order[2]);
    p.points = Field::Present(rng.gen_range(10..=36) as f64);
    match excluded {
        Some(0) => p.age = Field::Present(rng.gen_range(13..=17)),
        Some(1) => p.gender = Field::Present(Gender::Other),
        Some(_) => p.svo = Field::Present(Svo::Unclassified),
        None => {}
    }
    p
}

fn likert(x: f64) -> u8 {
    x.round().clamp(1.0, 5.0) as u8
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let emoticons = EmoticonConfig::builtin();
    let rows = spec.dialogues * 2;
    let mut excluded: Vec<bool> = (0..rows).map(|i| i < spec.excluded_rows.min(rows)).collect();
    excluded.shuffle(&mut rng);

    let mut dialogues = Vec::with_capacity(spec.dialogues);
    let mut scores = ContextualScores::default();
    for d in 0..spec.dialogues {
        let dialogue_id = format!("syn-{d:05}");
        let moods = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0f64)];
        let turns = rng.gen_range(spec.min_turns..=spec.max_turns.max(spec.min_turns));
        let mut utterances = Vec::with_capacity(turns);
        let mut tone_counts = [[0u32; 6]; 2];
        let first = rng.gen_range(0..2usize);
        for t in 0..turns {
            let who = (first + t) % 2;
            let draw = utterance(&mut rng, moods[who]);
            let utterance_id = format!("{dialogue_id}-{t}");
            let entry = if strip_emoticons(&draw.text, &emoticons).is_empty() {
                ScoreEntry {
                    scores: [0.0; 6],
                    model_id: "zero-fill".into(),
                    empty_flag: true,
                }
            } else {
                ScoreEntry {
                    scores: scores_for(&mut rng, draw.tone),
                    model_id: "synthetic".into(),
                    empty_flag: false,
                }
            };
            if let Some(tone) = draw.tone {
                tone_counts[who][tone.index()] += 1;
            }
            scores.insert(utterance_id.clone(), entry);
            utterances.push(Utterance {
                utterance_id,
                speaker: Agent::new(who as i64).unwrap(),
                text: draw.text,
                turn_index: t,
            });
        }
        let participants = [0usize, 1].map(|a| {
            let row = d * 2 + a;
            let flag = excluded[row].then(|| rng.gen_range(0..3u8));
            let mut p = participant(&mut rng, format!("{dialogue_id}:p{a}"), flag);
            let own = &tone_counts[a];
            let other = &tone_counts[1 - a];
            let neg = |c: &[u32; 6]| (c[2] + c[3] + c[4]) as f64;
            let pos = |c: &[u32; 6]| (c[0] + c[1]) as f64;
            let sat = 4.1 + 0.25 * moods[a] + 0.08 * pos(own) - 0.12 * neg(own) + rng.gen_range(-1.2..1.2);
            let like = 4.0 + 0.1 * pos(other) - 0.2 * other[4] as f64 - 0.1 * neg(other) + rng.gen_range(-1.2..1.2);
            p.satisfaction = Field::Present(likert(sat));
            p.likeness = Field::Present(likert(like));
            p
        });
        dialogues.push(Dialogue {
            dialogue_id,
            utterances,
            participants,
        });
    }
    let tag = format!(
        "synthetic dialogues={} seed={} excluded_rows={} turns={}..={}",
        spec.dialogues, spec.seed, spec.excluded_rows, spec.min_turns, spec.max_turns
    );
    let corpus = Corpus::new(dialogues, Provenance::new(SourceFormat::Synthetic, tag.as_bytes()))?;
    Ok(SyntheticData { corpus, scores })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_valid() {
        let a = generate(&SyntheticSpec::small(20, 7)).unwrap();
        let b = generate(&SyntheticSpec::small(20, 7)).unwrap();
        assert!(a.corpus.same_content(&b.corpus));
        assert_eq!(a.scores, b.scores);
        let c = generate(&SyntheticSpec::small(20, 8)).unwrap();
        assert!(!a.corpus.same_content(&c.corpus));
        assert_eq!(a.corpus.summary().participant_rows, 40);
        assert_eq!(a.scores.len(), a.corpus.summary().utterances);
    }
}
