use super::describe::mean;
use super::special::{f_sf, t_two_tailed};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestVariant {
    /// Equal-variance Student test, df = n_a + n_b − 2.
    Pooled,
    /// Unequal-variance Welch test with Welch–Satterthwaite df.
    #[default]
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    pub p: f64,
}

fn sum_sq(v: &[f64], m: f64) -> f64 {
    v.iter().map(|x| (x - m).powi(2)).sum()
}

/// Two-sample t-test; the sign of `t` follows mean(a) − mean(b).
pub fn t_test(a: &[f64], b: &[f64], variant: TTestVariant) -> Result<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Numerical(format!(
            "t-test needs at least 2 values per group (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a).unwrap(), mean(b).unwrap());
    let (va, vb) = (sum_sq(a, ma) / (na - 1.0), sum_sq(b, mb) / (nb - 1.0));
    let pooled_df = na + nb - 2.0;
    let diff = ma - mb;

    let (se, df) = match variant {
        TTestVariant::Pooled => {
            let sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / pooled_df;
            ((sp2 * (1.0 / na + 1.0 / nb)).sqrt(), pooled_df)
        }
        TTestVariant::Welch => {
            let (qa, qb) = (va / na, vb / nb);
            let se2 = qa + qb;
            let df = if se2 > 0.0 {
                se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0))
            } else {
                pooled_df
            };
            (se2.sqrt(), df)
        }
    };
    if se == 0.0 {
        return Ok(if diff == 0.0 {
            TTest { t: 0.0, df, p: 1.0 }
        } else {
            TTest {
                t: diff.signum() * f64::INFINITY,
                df,
                p: 0.0,
            }
        });
    }
    let t = diff / se;
    Ok(TTest {
        t,
        df,
        p: t_two_tailed(t, df)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anova {
    pub f: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub p: f64,
}

/// One-way ANOVA, F = MS_between / MS_within on (g − 1, n − g) df.
pub fn anova_oneway(groups: &[Vec<f64>]) -> Result<Anova> {
    let g = groups.len();
    if g < 2 {
        return Err(Error::Numerical(format!("ANOVA needs at least 2 groups (got {g})")));
    }
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::Numerical("ANOVA groups must be non-empty".into()));
    }
    let n: usize = groups.iter().map(Vec::len).sum();
    if n <= g {
        return Err(Error::Numerical(format!(
            "ANOVA needs more observations than groups ({n} <= {g})"
        )));
    }
    let grand = groups.iter().flatten().sum::<f64>() / n as f64;
    let (mut ssb, mut ssw) = (0.0, 0.0);
    for grp in groups {
        let m = mean(grp).unwrap();
        ssb += grp.len() as f64 * (m - grand).powi(2);
        ssw += sum_sq(grp, m);
    }
    let (dfb, dfw) = (g - 1, n - g);
    if ssw == 0.0 {
        let degenerate = ssb == 0.0;
        return Ok(Anova {
            f: if degenerate { 0.0 } else { f64::INFINITY },
            df_between: dfb,
            df_within: dfw,
            p: if degenerate { 1.0 } else { 0.0 },
        });
    }
    let f = (ssb / dfb as f64) / (ssw / dfw as f64);
    Ok(Anova {
        f,
        df_between: dfb,
        df_within: dfw,
        p: f_sf(f, dfb as f64, dfw as f64)?,
    })
}
