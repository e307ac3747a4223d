//! Affect feature extraction and outcome analysis for two-party negotiation
//! dialogues.
//!
//! The crate is organised the way an analysis run flows:
//!
//! * [`corpus`] – dialogue/participant data model, ingestion and exclusion policies.
//! * [`affect`] – emoticon, lexicon and contextual (classifier score) features.
//! * [`stats`] – descriptive statistics, hypothesis tests, OLS and block-wise
//!   hierarchical regression, plus the distribution functions they need.
//! * [`lexcorr`] – per-utterance emotion labels and log-odds lexical correlates.
//! * [`pipeline`] – run configuration, analysis commands and report writers.
//!
//! Data-parallel loops go through [`Execution`]; with the `parallel` feature
//! disabled every mode runs sequentially.

pub mod affect;
pub mod corpus;
mod error;
mod exec;
pub mod lexcorr;
pub mod pipeline;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use exec::Execution;
