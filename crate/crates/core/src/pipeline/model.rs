//! Persisted regression models and their application to new rows.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::{is_known_column, RowContext};
use crate::affect::Method;
use crate::corpus::Agent;
use crate::error::{Error, Result};
use crate::stats::{linear_predict, ModelFit};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelProvenance {
    pub config_sha256: String,
    pub corpus_sha256: String,
}

/// A fitted outcome model: intercept plus named coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FittedPredictor {
    pub schema_version: u32,
    pub outcome: String,
    pub method: Method,
    pub intercept: f64,
    pub coefficients: Vec<Coefficient>,
    pub training_n: usize,
    pub training_r2: f64,
    pub provenance: ModelProvenance,
}

/// Likert bounds for the convenience clamp.
pub const OUTCOME_RANGE: (f64, f64) = (1.0, 5.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub dialogue_id: String,
    pub agent: Agent,
    pub participant_id: String,
    /// `None` when a predictor value is missing for this row.
    pub predicted: Option<f64>,
    pub missing: Vec<String>,
}

impl Prediction {
    pub fn clamped(&self) -> Option<f64> {
        self.predicted.map(|p| p.clamp(OUTCOME_RANGE.0, OUTCOME_RANGE.1))
    }

    pub fn out_of_range(&self) -> Option<bool> {
        self.predicted.map(|p| p < OUTCOME_RANGE.0 || p > OUTCOME_RANGE.1)
    }
}

impl FittedPredictor {
    pub fn from_fit(fit: &ModelFit, outcome: &str, method: Method, provenance: ModelProvenance) -> Self {
        FittedPredictor {
            schema_version: SCHEMA_VERSION,
            outcome: outcome.to_string(),
            method,
            intercept: fit.intercept(),
            coefficients: fit
                .names
                .iter()
                .zip(&fit.coefficients[1..])
                .map(|(n, v)| Coefficient {
                    name: n.clone(),
                    value: *v,
                })
                .collect(),
            training_n: fit.n,
            training_r2: fit.r2,
            provenance,
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.coefficients.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn validate(&self, origin: &str) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(
                origin,
                "schema_version",
                format!("expected {SCHEMA_VERSION}, found {}", self.schema_version),
            ));
        }
        if self.provenance.config_sha256.is_empty() || self.provenance.corpus_sha256.is_empty() {
            return Err(Error::invalid(origin, "provenance", "hashes must not be empty"));
        }
        if !matches!(self.outcome.as_str(), "satisfaction" | "likeness") {
            return Err(Error::invalid(origin, "outcome", format!("unknown outcome {:?}", self.outcome)));
        }
        let unknown: Vec<&str> = self.names().into_iter().filter(|n| !is_known_column(n)).collect();
        if !unknown.is_empty() {
            return Err(Error::invalid(origin, "coefficients", format!("unknown predictors: {}", unknown.join(", "))));
        }
        if let Some(c) = self.coefficients.iter().find(|c| !c.value.is_finite()) {
            return Err(Error::invalid(origin, "coefficients", format!("{} is not finite", c.name)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let m: FittedPredictor = serde_json::from_str(text).map_err(|e| Error::schema(origin, e.to_string()))?;
        m.validate(origin)?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// intercept + Σ bᵢxᵢ for values given in coefficient order.
    pub fn predict_values(&self, values: &[f64]) -> f64 {
        let b: Vec<f64> = self.coefficients.iter().map(|c| c.value).collect();
        linear_predict(self.intercept, &b, values)
    }

    pub fn predict(&self, contexts: &[RowContext<'_>]) -> Result<Vec<Prediction>> {
        let unknown: Vec<&str> = self.names().into_iter().filter(|n| !is_known_column(n)).collect();
        if !unknown.is_empty() {
            return Err(Error::Config(format!(
                "model predictors missing from the input: {}",
                unknown.join(", ")
            )));
        }
        contexts
            .iter()
            .map(|c| {
                let mut values = Vec::with_capacity(self.coefficients.len());
                let mut missing = Vec::new();
                for coef in &self.coefficients {
                    match c.value(&coef.name)? {
                        Some(v) => values.push(v),
                        None => missing.push(coef.name.clone()),
                    }
                }
                Ok(Prediction {
                    dialogue_id: c.own.dialogue_id.clone(),
                    agent: c.own.agent,
                    participant_id: c.own.participant_id.clone(),
                    predicted: missing.is_empty().then(|| self.predict_values(&values)),
                    missing,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(intercept: f64, coefs: &[(&str, f64)]) -> FittedPredictor {
        FittedPredictor {
            schema_version: SCHEMA_VERSION,
            outcome: "satisfaction".into(),
            method: Method::Emoticon,
            intercept,
            coefficients: coefs
                .iter()
                .map(|(n, v)| Coefficient {
                    name: n.to_string(),
                    value: *v,
                })
                .collect(),
            training_n: 10,
            training_r2: 0.5,
            provenance: ModelProvenance {
                config_sha256: "c".into(),
                corpus_sha256: "d".into(),
            },
        }
    }

    #[test]
    fn zero_model_predicts_intercept() {
        let m = model(4.0, &[("age", 0.0), ("emoticon_joy", 0.0)]);
        assert_eq!(m.predict_values(&[33.0, 7.0]), 4.0);
        assert_eq!(m.predict_values(&[-1.0, 1e6]), 4.0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = model(0.1 + 0.2, &[("age", 1.0 / 3.0), ("gender[Male]", -2e-17)]);
        let back = FittedPredictor::parse(&m.to_json(), "m").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn validation() {
        assert!(FittedPredictor::parse(&model(1.0, &[("shoe_size", 1.0)]).to_json(), "m").is_err());
        let mut m = model(1.0, &[]);
        m.schema_version = 9;
        assert!(FittedPredictor::parse(&m.to_json(), "m").is_err());
        let mut m = model(1.0, &[]);
        m.provenance.corpus_sha256.clear();
        assert!(FittedPredictor::parse(&m.to_json(), "m").is_err());
    }

    #[test]
    fn clamping() {
        let p = Prediction {
            dialogue_id: "d".into(),
            agent: Agent::FIRST,
            participant_id: "p".into(),
            predicted: Some(5.7),
            missing: vec![],
        };
        assert_eq!((p.clamped(), p.out_of_range()), (Some(5.0), Some(true)));
    }
}
