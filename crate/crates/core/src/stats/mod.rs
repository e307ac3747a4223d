//! Descriptive statistics, hypothesis tests, dummy coding, OLS and
//! hierarchical regression.

mod describe;
mod dummy;
mod hierarchical;
mod hypothesis;
mod ols;
mod special;

pub use describe::{mean, mean_std, pairwise_complete, pearson, Correlation};
pub use dummy::{dummy_code, most_frequent, DummyCoding};
pub use hierarchical::{f_change, hierarchical_fit, AnalysisRow, AnalysisTable, StepChange, StepwiseResult};
pub use hypothesis::{anova_oneway, t_test, Anova, TTest, TTestVariant};
pub use ols::{linear_predict, ols_fit, ModelFit, INTERCEPT};
pub use special::{
    erfc, f_cdf, f_sf, inc_beta, ln_beta, ln_gamma, normal_cdf, normal_two_tailed, t_cdf, t_two_tailed,
};

/// Star bucket for a p-value: `***` below .001, `**` below .01, `*` below .05.
pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}
