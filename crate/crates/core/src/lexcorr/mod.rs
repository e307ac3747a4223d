//! Utterance-level emotion labels and the lexical correlates of each label.

mod label;
mod logodds;
mod samples;

pub use label::{
    corpus_affect, label_all, label_utterance, plurality, resolve_tie, LabelSet, LabeledUtterance, TiePolicy, Vote,
};
pub use logodds::{log_odds_all, log_odds_dirichlet, log_odds_pair, top_k_correlates, LogOddsEntry, TokenStats};
pub use samples::{top_confident_samples, Sample};

/// Default prior strength.
pub const DEFAULT_ALPHA0: f64 = 500.0;
/// Default minimum corpus-wide count before a token is ranked.
pub const DEFAULT_MIN_COUNT: u64 = 3;
