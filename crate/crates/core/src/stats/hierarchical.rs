use super::ols::{ols_fit, ModelFit};
use super::special::f_sf;
use crate::corpus::Agent;
use crate::error::{Error, Result};

/// One participant-in-dialogue with values in [`AnalysisTable::columns`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRow {
    pub dialogue_id: String,
    pub agent: Agent,
    /// `None` marks a missing value; nothing is imputed.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisTable {
    pub columns: Vec<String>,
    pub rows: Vec<AnalysisRow>,
}

impl AnalysisTable {
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Config(format!("unknown analysis column {name:?}")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let j = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r.values[j]).collect())
    }
}

/// Change statistics for adding a block on top of the previous step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepChange {
    pub delta_r2: f64,
    pub f_change: f64,
    /// Δk
    pub df1: usize,
    /// n − k_full − 1
    pub df2: usize,
    pub p: f64,
}

/// F-change = (ΔR²/Δk) / ((1 − R²_full)/(n − k_full − 1)).
///
/// Adding no columns gives ΔR² = 0, F = 0, p = 1.
pub fn f_change(r2_reduced: f64, r2_full: f64, k_reduced: usize, k_full: usize, n: usize) -> Result<StepChange> {
    if k_full < k_reduced {
        return Err(Error::Numerical(format!(
            "f_change: full model has fewer predictors ({k_full}) than reduced ({k_reduced})"
        )));
    }
    if n <= k_full + 1 {
        return Err(Error::Numerical(format!(
            "f_change: n = {n} leaves no residual df for k = {k_full}"
        )));
    }
    let df1 = k_full - k_reduced;
    let df2 = n - k_full - 1;
    // Nested least-squares fits cannot lose R²; clip rounding noise.
    let delta_r2 = (r2_full - r2_reduced).max(0.0);
    if df1 == 0 {
        return Ok(StepChange { delta_r2: 0.0, f_change: 0.0, df1, df2, p: 1.0 });
    }
    if r2_full >= 1.0 {
        let f = if delta_r2 > 0.0 { f64::INFINITY } else { 0.0 };
        let p = if delta_r2 > 0.0 { 0.0 } else { 1.0 };
        return Ok(StepChange { delta_r2, f_change: f, df1, df2, p });
    }
    let f = (delta_r2 / df1 as f64) / ((1.0 - r2_full) / df2 as f64);
    Ok(StepChange {
        delta_r2,
        f_change: f,
        df1,
        df2,
        p: f_sf(f, df1 as f64, df2 as f64)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepwiseResult {
    pub outcome: String,
    /// Rows that survived listwise deletion, shared by every step.
    pub row_ids: Vec<(String, Agent)>,
    pub steps: Vec<ModelFit>,
    /// `changes[0]` compares step 1 with the intercept-only model.
    pub changes: Vec<StepChange>,
}

impl StepwiseResult {
    pub fn n(&self) -> usize {
        self.row_ids.len()
    }

    pub fn last(&self) -> &ModelFit {
        self.steps.last().expect("at least one step")
    }
}

/// Fits nested OLS models, step i using the union of `blocks[..=i]`.
///
/// Names repeated in a later block are ignored there. Rows with a missing
/// outcome or any missing predictor from any block are dropped once, up
/// front, so every step sees the same n.
pub fn hierarchical_fit(table: &AnalysisTable, blocks: &[Vec<String>], outcome: &str) -> Result<StepwiseResult> {
    if blocks.is_empty() {
        return Err(Error::Config("hierarchical regression needs at least one block".into()));
    }
    let mut cumulative: Vec<Vec<String>> = Vec::with_capacity(blocks.len());
    let mut current: Vec<String> = Vec::new();
    for block in blocks {
        for name in block {
            if !current.contains(name) {
                current.push(name.clone());
            }
        }
        cumulative.push(current.clone());
    }
    let union = cumulative.last().unwrap();
    let y_idx = table.column_index(outcome)?;
    if union.iter().any(|n| n == outcome) {
        return Err(Error::Config(format!("outcome {outcome:?} is also listed as a predictor")));
    }
    let idx: Vec<usize> = union.iter().map(|n| table.column_index(n)).collect::<Result<_>>()?;

    let kept: Vec<&AnalysisRow> = table
        .rows
        .iter()
        .filter(|r| r.values[y_idx].is_some() && idx.iter().all(|&j| r.values[j].is_some()))
        .collect();
    let y: Vec<f64> = kept.iter().map(|r| r.values[y_idx].unwrap()).collect();
    let column = |j: usize| -> Vec<f64> { kept.iter().map(|r| r.values[j].unwrap()).collect() };

    let mut steps: Vec<ModelFit> = Vec::with_capacity(cumulative.len());
    let mut changes = Vec::with_capacity(cumulative.len());
    for names in &cumulative {
        let cols: Vec<Vec<f64>> = names.iter().map(|n| column(idx[union.iter().position(|u| u == n).unwrap()])).collect();
        let fit = ols_fit(&cols, names, &y)?;
        let (r2_prev, k_prev) = steps.last().map_or((0.0, 0), |s| (s.r2, s.df_model));
        changes.push(f_change(r2_prev, fit.r2, k_prev, fit.df_model, fit.n)?);
        steps.push(fit);
    }
    Ok(StepwiseResult {
        outcome: outcome.to_string(),
        row_ids: kept.iter().map(|r| (r.dialogue_id.clone(), r.agent)).collect(),
        steps,
        changes,
    })
}
