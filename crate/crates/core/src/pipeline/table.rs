//! Flattening profiles and participant records into analysis rows.
//!
//! Column names:
//! * continuous variables by name (`age`, `openness`, ...);
//! * indicator columns as `variable[Level]` (`gender[Male]`);
//! * own affect as `emoticon_joy`, `lexicon_anger`, `contextual_fear`, ...;
//! * the partner's affect with a `partner_` prefix;
//! * outcomes `satisfaction` and `likeness` last.

use std::collections::{BTreeMap, HashMap};

use crate::affect::{AffectProfile, Method};
use crate::corpus::{Agent, Corpus, Field, ParticipantRecord, Variable};
use crate::error::{Error, Result};
use crate::stats::{most_frequent, AnalysisRow, AnalysisTable};

pub const PARTNER_PREFIX: &str = "partner_";
pub const OUTCOMES: [&str; 2] = ["satisfaction", "likeness"];

/// The indicator columns kept for one categorical variable.
#[derive(Debug, Clone, PartialEq)]
pub struct DummyGroup {
    pub variable: Variable,
    pub reference: String,
    /// Non-reference levels observed in the data, in declaration order.
    pub levels: Vec<String>,
    /// Declared levels with no observed value; they get no column.
    pub unobserved: Vec<String>,
}

pub fn dummy_name(var: Variable, level: &str) -> String {
    format!("{}[{}]", var.name(), level)
}

/// Column names and grouping of the regression design.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub individual: Vec<String>,
    pub dummies: Vec<DummyGroup>,
}

impl Layout {
    /// [individual difference, own affect, partner affect].
    pub fn blocks(&self, method: Method) -> Vec<Vec<String>> {
        let own = method.columns();
        let partner = own.iter().map(|c| format!("{PARTNER_PREFIX}{c}")).collect();
        vec![self.individual.clone(), own, partner]
    }
}

/// One participant-in-dialogue together with its partner's affect.
pub struct RowContext<'a> {
    pub participant: &'a ParticipantRecord,
    pub own: &'a AffectProfile,
    pub partner: &'a AffectProfile,
}

fn field(f: Field<f64>) -> Option<f64> {
    f.value().copied()
}

impl RowContext<'_> {
    /// Value of any column name; `Err` for names that mean nothing.
    pub fn value(&self, column: &str) -> Result<Option<f64>> {
        if let Some(rest) = column.strip_prefix(PARTNER_PREFIX) {
            return self
                .partner
                .feature(rest)
                .ok_or_else(|| unknown(column));
        }
        if let Some(v) = self.own.feature(column) {
            return Ok(v);
        }
        if let Some((var, level)) = parse_dummy(column) {
            return Ok(self
                .participant
                .level(var)
                .and_then(|f| f.value().copied())
                .map(|l| if l == level { 1.0 } else { 0.0 }));
        }
        match Variable::from_name(column) {
            Some(v) if !v.is_categorical() => Ok(field(self.participant.numeric(v).unwrap())),
            _ => Err(unknown(column)),
        }
    }
}

/// Whether `column` names something [`RowContext::value`] can evaluate.
pub fn is_known_column(column: &str) -> bool {
    let bare = column.strip_prefix(PARTNER_PREFIX);
    let affect = |c: &str| Method::ALL.iter().any(|m| m.columns().iter().any(|x| x == c));
    match bare {
        Some(rest) => affect(rest),
        None => {
            affect(column)
                || parse_dummy(column).is_some()
                || Variable::from_name(column).is_some_and(|v| !v.is_categorical())
        }
    }
}

fn unknown(column: &str) -> Error {
    Error::Config(format!("unknown analysis column {column:?}"))
}

fn parse_dummy(column: &str) -> Option<(Variable, &str)> {
    let (var, rest) = column.split_once('[')?;
    let level = rest.strip_suffix(']')?;
    let var = Variable::from_name(var).filter(|v| v.is_categorical())?;
    var.levels().contains(&level).then_some((var, level))
}

/// Pairs every profile with its dialogue partner, in profile order.
pub fn row_contexts<'a>(corpus: &'a Corpus, profiles: &'a [AffectProfile]) -> Result<Vec<RowContext<'a>>> {
    let dialogues: HashMap<&str, &crate::corpus::Dialogue> =
        corpus.dialogues.iter().map(|d| (d.dialogue_id.as_str(), d)).collect();
    let by_key: HashMap<(&str, Agent), &AffectProfile> = profiles
        .iter()
        .map(|p| ((p.dialogue_id.as_str(), p.agent), p))
        .collect();
    profiles
        .iter()
        .map(|own| {
            let d = dialogues.get(own.dialogue_id.as_str()).ok_or_else(|| {
                Error::invalid("profiles", "dialogue_id", format!("{} is not in the corpus", own.dialogue_id))
            })?;
            let partner = by_key.get(&(own.dialogue_id.as_str(), own.agent.partner())).ok_or_else(|| {
                Error::invalid(
                    format!("dialogue {}", own.dialogue_id),
                    "agent",
                    format!("no profile for the partner of agent {}", own.agent.index()),
                )
            })?;
            Ok(RowContext {
                participant: d.participant(own.agent),
                own,
                partner,
            })
        })
        .collect()
}

/// Works out step-1 column names, choosing reference levels and dropping
/// levels that never occur.
pub fn layout(
    contexts: &[RowContext<'_>],
    individual: &[Variable],
    references: &BTreeMap<Variable, String>,
) -> Result<Layout> {
    let mut columns = Vec::new();
    let mut dummies = Vec::new();
    for &var in individual {
        if !var.is_categorical() {
            columns.push(var.name().to_string());
            continue;
        }
        let values: Vec<Option<&str>> = contexts
            .iter()
            .map(|c| c.participant.level(var).and_then(|f| f.value().copied()))
            .collect();
        let observed: Vec<&str> = var
            .levels()
            .iter()
            .copied()
            .filter(|l| values.contains(&Some(*l)))
            .collect();
        let reference = match references.get(&var) {
            Some(r) => r.clone(),
            None => most_frequent(&values, var.levels())
                .ok_or_else(|| Error::Config(format!("{var} has no observed values")))?
                .to_string(),
        };
        if !observed.contains(&reference.as_str()) {
            return Err(Error::Config(format!(
                "reference level {reference:?} of {var} does not occur in the data"
            )));
        }
        let levels: Vec<String> = observed
            .iter()
            .filter(|l| **l != reference)
            .map(|l| l.to_string())
            .collect();
        columns.extend(levels.iter().map(|l| dummy_name(var, l)));
        dummies.push(DummyGroup {
            variable: var,
            reference,
            levels,
            unobserved: var
                .levels()
                .iter()
                .filter(|l| !observed.contains(l))
                .map(|l| l.to_string())
                .collect(),
        });
    }
    Ok(Layout {
        individual: columns,
        dummies,
    })
}

/// Table with the step-1 columns, own and partner affect for every method,
/// and both outcomes.
pub fn build_table(contexts: &[RowContext<'_>], layout: &Layout) -> Result<AnalysisTable> {
    let mut columns = layout.individual.clone();
    for m in Method::ALL {
        columns.extend(m.columns());
    }
    for m in Method::ALL {
        columns.extend(m.columns().into_iter().map(|c| format!("{PARTNER_PREFIX}{c}")));
    }
    columns.extend(OUTCOMES.map(String::from));
    let rows = contexts
        .iter()
        .map(|c| {
            Ok(AnalysisRow {
                dialogue_id: c.own.dialogue_id.clone(),
                agent: c.own.agent,
                values: columns.iter().map(|n| c.value(n)).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AnalysisTable { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dummy_names_round_trip() {
        let n = dummy_name(Variable::Ethnicity, "Asian American");
        assert_eq!(n, "ethnicity[Asian American]");
        assert_eq!(parse_dummy(&n), Some((Variable::Ethnicity, "Asian American")));
        assert_eq!(parse_dummy("gender[Robot]"), None);
        assert_eq!(parse_dummy("age[1]"), None);
    }

    #[test]
    fn known_columns() {
        for c in ["age", "gender[Male]", "lexicon_anxiety", "partner_contextual_love", "satisfaction"] {
            assert!(is_known_column(c), "{c}");
        }
        for c in ["gender", "partner_age", "emoticon_love", "partner_partner_emoticon_joy", "x"] {
            assert!(!is_known_column(c), "{c}");
        }
    }

    #[test]
    fn blocks_per_method() {
        let l = Layout {
            individual: vec!["age".into()],
            dummies: vec![],
        };
        let b = l.blocks(Method::Contextual);
        assert_eq!(b[1].len(), 6);
        assert_eq!(b[2][0], "partner_contextual_joy");
    }
}
