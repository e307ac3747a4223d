use crate::affect::{ContextualScores, EmotionLabel, Method, UtteranceAffect};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub utterance_id: String,
    pub dialogue_id: String,
    pub text: String,
    pub confidence: f64,
}

fn detected(a: &UtteranceAffect, method: Method) -> bool {
    match method {
        Method::Emoticon => a.emoticon_counts.iter().any(|&c| c > 0),
        Method::Lexicon => a.lexicon_counts.iter().any(|&c| c > 0),
        Method::Contextual => false,
    }
}

/// Highest-confidence utterances the classifier labels `category`, skipping
/// any utterance in which a method listed in `exclude` finds a signal.
/// Ordered by confidence descending, then utterance id.
pub fn top_confident_samples(
    corpus: &Corpus,
    affect: &[UtteranceAffect],
    scores: &ContextualScores,
    category: EmotionLabel,
    k: usize,
    exclude: &[Method],
) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for ((d, u), a) in corpus.utterances().zip(affect) {
        if a.utterance_id != u.utterance_id {
            return Err(Error::Numerical(format!(
                "affect order mismatch: {} vs {}",
                a.utterance_id, u.utterance_id
            )));
        }
        if exclude.iter().any(|&m| detected(a, m)) {
            continue;
        }
        let entry = scores.get(&u.utterance_id).ok_or_else(|| {
            Error::invalid("contextual scores", "utterance_id", format!("no scores for {}", u.utterance_id))
        })?;
        if entry.empty_flag || entry.argmax().0 != category {
            continue;
        }
        out.push(Sample {
            utterance_id: u.utterance_id.clone(),
            dialogue_id: d.dialogue_id.clone(),
            text: u.text.clone(),
            confidence: entry.score(category),
        });
    }
    out.sort_by(|a, b| {
        b.confidence
            .total_cmp(&a.confidence)
            .then_with(|| a.utterance_id.cmp(&b.utterance_id))
    });
    out.truncate(k);
    Ok(out)
}

