//! Per-variable exclusion rules.
//!
//! Policy file (TOML):
//!
//! ```toml
//! [[rule]]
//! variable = "age"
//! at_most = 17
//!
//! [[rule]]
//! variable = "svo"
//! equals = "Unclassified"
//! ```
//!
//! A matching value becomes [`Field::Excluded`]; the record itself stays.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{Agent, Corpus, Field, Variable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    AtMost(f64),
    AtLeast(f64),
    Equals(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionRule {
    pub variable: Variable,
    pub condition: Condition,
}

impl fmt::Display for ExclusionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.condition {
            Condition::AtMost(t) => write!(f, "{} <= {t}", self.variable),
            Condition::AtLeast(t) => write!(f, "{} >= {t}", self.variable),
            Condition::Equals(s) => write!(f, "{} == {s}", self.variable),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExclusionPolicy {
    pub rules: Vec<ExclusionRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePolicy {
    #[serde(default)]
    rule: Vec<WireRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRule {
    variable: String,
    at_most: Option<f64>,
    at_least: Option<f64>,
    equals: Option<String>,
}

impl ExclusionPolicy {
    /// Ages of 17 and below are treated as data-entry errors.
    pub fn age_only() -> Self {
        ExclusionPolicy {
            rules: vec![ExclusionRule {
                variable: Variable::Age,
                condition: Condition::AtMost(17.0),
            }],
        }
    }

    /// Age rule plus the two sparse categorical levels (gender `Other`, SVO
    /// `Unclassified`). With these excluded the individual-difference block
    /// dummy-codes to 14 predictors.
    pub fn sparse_levels() -> Self {
        let mut p = Self::age_only();
        p.rules.push(ExclusionRule {
            variable: Variable::Gender,
            condition: Condition::Equals("Other".into()),
        });
        p.rules.push(ExclusionRule {
            variable: Variable::Svo,
            condition: Condition::Equals("Unclassified".into()),
        });
        p
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let wire: WirePolicy =
            toml::from_str(text).map_err(|e| Error::schema(origin, e.to_string()))?;
        let mut rules = Vec::with_capacity(wire.rule.len());
        for (i, r) in wire.rule.into_iter().enumerate() {
            let loc = format!("{origin} rule {}", i + 1);
            let variable = Variable::from_name(&r.variable)
                .ok_or_else(|| Error::invalid(&loc, "variable", format!("unknown variable {:?}", r.variable)))?;
            let condition = match (r.at_most, r.at_least, r.equals) {
                (Some(t), None, None) => Condition::AtMost(t),
                (None, Some(t), None) => Condition::AtLeast(t),
                (None, None, Some(s)) => Condition::Equals(s),
                _ => {
                    return Err(Error::invalid(
                        &loc,
                        "condition",
                        "exactly one of at_most, at_least, equals is required",
                    ))
                }
            };
            if variable.is_categorical() {
                match &condition {
                    Condition::Equals(s) if variable.levels().iter().any(|l| l.eq_ignore_ascii_case(s)) => {}
                    Condition::Equals(s) => {
                        return Err(Error::invalid(&loc, "equals", format!("{s:?} is not a level of {variable}")))
                    }
                    _ => {
                        return Err(Error::invalid(&loc, "condition", format!("{variable} is categorical; use equals")))
                    }
                }
            }
            rules.push(ExclusionRule { variable, condition });
        }
        Ok(ExclusionPolicy { rules })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionEntry {
    pub dialogue_id: String,
    pub agent: Agent,
    pub participant_id: String,
    pub variable: Variable,
    pub value: String,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExclusionReport {
    pub entries: Vec<ExclusionEntry>,
}

impl ExclusionReport {
    /// Number of participant rows that lost `var`.
    pub fn rows(&self, var: Variable) -> usize {
        self.entries.iter().filter(|e| e.variable == var).count()
    }

    /// Number of distinct participants that lost `var`.
    pub fn participants(&self, var: Variable) -> usize {
        self.entries
            .iter()
            .filter(|e| e.variable == var)
            .map(|e| e.participant_id.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

fn matches(rule: &ExclusionRule, numeric: Option<Field<f64>>, level: Option<Field<&str>>) -> Option<String> {
    match (&rule.condition, numeric, level) {
        (Condition::AtMost(t), Some(Field::Present(x)), _) if x <= *t => Some(x.to_string()),
        (Condition::AtLeast(t), Some(Field::Present(x)), _) if x >= *t => Some(x.to_string()),
        (Condition::Equals(s), Some(Field::Present(x)), _) if s.parse::<f64>() == Ok(x) => {
            Some(x.to_string())
        }
        (Condition::Equals(s), _, Some(Field::Present(l))) if l.eq_ignore_ascii_case(s) => {
            Some(l.to_string())
        }
        _ => None,
    }
}

/// Marks every value hit by a rule as excluded and lists each hit.
///
/// The number of dialogues and participant records never changes.
pub fn apply_exclusions(corpus: &Corpus, policy: &ExclusionPolicy) -> (Corpus, ExclusionReport) {
    let mut out = corpus.clone();
    let mut report = ExclusionReport::default();
    for d in &mut out.dialogues {
        for agent in Agent::BOTH {
            let p = &mut d.participants[agent.index()];
            for rule in &policy.rules {
                let numeric = p.numeric(rule.variable);
                let level = p.level(rule.variable);
                if let Some(value) = matches(rule, numeric, level) {
                    p.exclude(rule.variable);
                    report.entries.push(ExclusionEntry {
                        dialogue_id: d.dialogue_id.clone(),
                        agent,
                        participant_id: p.participant_id.clone(),
                        variable: rule.variable,
                        value,
                        rule: rule.to_string(),
                    });
                }
            }
        }
    }
    (out, report)
}
