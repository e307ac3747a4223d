use super::special::f_sf;
use crate::error::{Error, Result};

/// Name used for the intercept in coefficient listings and error messages.
pub const INTERCEPT: &str = "(intercept)";

/// Ordinary least squares fit with an implicit intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    /// Predictor names, excluding the intercept.
    pub names: Vec<String>,
    /// `coefficients[0]` is the intercept; `coefficients[i + 1]` belongs to `names[i]`.
    pub coefficients: Vec<f64>,
    pub r2: f64,
    pub f: f64,
    /// Numerator df, k.
    pub df_model: usize,
    /// Denominator df, n − k − 1.
    pub df_resid: usize,
    pub p: f64,
    pub n: usize,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ModelFit {
    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(self.coefficients[i + 1])
    }

    /// Prediction for one row given in `names` order.
    pub fn predict(&self, row: &[f64]) -> f64 {
        linear_predict(self.coefficients[0], &self.coefficients[1..], row)
    }
}

/// intercept + Σ bᵢxᵢ, accumulated left to right.
pub fn linear_predict(intercept: f64, coefficients: &[f64], row: &[f64]) -> f64 {
    debug_assert_eq!(coefficients.len(), row.len());
    coefficients
        .iter()
        .zip(row)
        .fold(intercept, |acc, (b, x)| acc + b * x)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

const RANK_TOL: f64 = 1e-10;

/// Fits `y ~ 1 + columns` by Householder QR.
///
/// `columns` holds one predictor per entry, each of length n. Fails when
/// n ≤ k + 1, when y has no variance, or when the design is rank deficient;
/// in the last case the message names the first dependent column and the
/// earlier columns it is a combination of.
pub fn ols_fit(columns: &[Vec<f64>], names: &[String], y: &[f64]) -> Result<ModelFit> {
    let n = y.len();
    let k = columns.len();
    if names.len() != k {
        return Err(Error::Numerical(format!(
            "ols: {} columns but {} names",
            k,
            names.len()
        )));
    }
    if let Some((c, name)) = columns.iter().zip(names).find(|(c, _)| c.len() != n) {
        return Err(Error::Numerical(format!(
            "ols: column {name} has {} values, expected {n}",
            c.len()
        )));
    }
    if n <= k + 1 {
        return Err(Error::Numerical(format!(
            "ols needs more than k + 1 = {} observations (got {n})",
            k + 1
        )));
    }
    if let Some(v) = y.iter().chain(columns.iter().flatten()).find(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("ols: non-finite value {v} in input")));
    }
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - y_mean).powi(2)).sum();
    if sst == 0.0 {
        return Err(Error::Numerical("ols: outcome has zero variance".into()));
    }

    let label = |j: usize| if j == 0 { INTERCEPT } else { names[j - 1].as_str() };
    let p = k + 1;
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(p);
    a.push(vec![1.0; n]);
    a.extend(columns.iter().cloned());
    let col_norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut qty = y.to_vec();

    for j in 0..p {
        let alpha = {
            let x = &a[j][j..];
            let s = norm(x);
            if x[0] > 0.0 {
                -s
            } else {
                s
            }
        };
        if alpha.abs() <= RANK_TOL * col_norms[j] || col_norms[j] == 0.0 {
            return Err(rank_error(&a, &col_norms, j, &label));
        }
        let mut v = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        let reflect = |c: &mut [f64]| {
            let s = 2.0 * v.iter().zip(c.iter()).map(|(a, b)| a * b).sum::<f64>() / vnorm2;
            for (ci, vi) in c.iter_mut().zip(&v) {
                *ci -= s * vi;
            }
        };
        for col in a.iter_mut().skip(j + 1) {
            reflect(&mut col[j..]);
        }
        reflect(&mut qty[j..]);
        a[j][j] = alpha;
        for x in &mut a[j][j + 1..] {
            *x = 0.0;
        }
    }

    // Back substitution on R b = Qᵀy.
    let mut b = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|c| a[c][i] * b[c]).sum();
        b[i] = (qty[i] - s) / a[i][i];
    }

    let mut fitted = Vec::with_capacity(n);
    let mut row = vec![0.0; k];
    for r in 0..n {
        for (x, c) in row.iter_mut().zip(columns) {
            *x = c[r];
        }
        fitted.push(linear_predict(b[0], &b[1..], &row));
    }
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let r2 = (1.0 - ssr / sst).clamp(0.0, 1.0);
    let df_resid = n - k - 1;
    let (f, pval) = if k == 0 {
        (0.0, 1.0)
    } else if r2 >= 1.0 {
        (f64::INFINITY, 0.0)
    } else {
        let f = (r2 / k as f64) / ((1.0 - r2) / df_resid as f64);
        (f, f_sf(f, k as f64, df_resid as f64)?)
    };

    Ok(ModelFit {
        names: names.to_vec(),
        coefficients: b,
        r2,
        f,
        df_model: k,
        df_resid,
        p: pval,
        n,
        fitted,
        residuals,
    })
}

/// Column `j` (after j reflections) has a vanishing diagonal: express it in
/// terms of the earlier, independent columns through the leading block of R.
fn rank_error<'a>(
    a: &[Vec<f64>],
    col_norms: &[f64],
    j: usize,
    label: &impl Fn(usize) -> &'a str,
) -> Error {
    if col_norms[j] == 0.0 {
        return Error::Numerical(format!(
            "design matrix is rank deficient: {} is identically zero",
            label(j)
        ));
    }
    let mut w = vec![0.0; j];
    for i in (0..j).rev() {
        let s: f64 = (i + 1..j).map(|c| a[c][i] * w[c]).sum();
        w[i] = (a[j][i] - s) / a[i][i];
    }
    let deps: Vec<&str> = (0..j)
        .filter(|&i| (w[i] * col_norms[i]).abs() > 1e-6 * col_norms[j])
        .map(label)
        .collect();
    Error::Numerical(format!(
        "design matrix is rank deficient: {} is a linear combination of {{{}}}",
        label(j),
        deps.join(", ")
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn names(k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn exact_linear_outcome() {
        let x1 = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let x2 = vec![2.0, -1.0, 0.5, 3.0, 1.0, 0.0];
        let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 1.5 + 2.0 * a - 3.0 * b).collect();
        let fit = ols_fit(&[x1, x2], &names(2), &y).unwrap();
        assert_abs_diff_eq!(fit.r2, 1.0, epsilon = 1e-12);
        assert_eq!(fit.p, 0.0);
        for (got, want) in fit.coefficients.iter().zip([1.5, 2.0, -3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
        assert!(fit.residuals.iter().all(|e| e.abs() < 1e-10));
    }

    #[test]
    fn simple_regression_closed_form() {
        // slope = Sxy/Sxx = 8/10, intercept = 3.0 − 0.8·3 = 0.6
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let y = vec![2.0, 1.0, 4.0, 3.0, 5.0];
        let fit = ols_fit(&[x], &names(1), &y).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coefficients[1], 0.8, epsilon = 1e-12);
        // R² equals r² = 0.64; F = 0.64 / (0.36 / 3)
        assert_abs_diff_eq!(fit.r2, 0.64, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.f, 0.64 / 0.12, epsilon = 1e-10);
        assert_eq!((fit.df_model, fit.df_resid, fit.n), (1, 3, 5));
        // same p as the pearson test on these data
        assert_abs_diff_eq!(fit.p, 0.104_088_038_661_827_99, epsilon = 1e-10);
    }

    #[test]
    fn rank_deficiency_names_dependent_set() {
        let x1 = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let x2 = vec![0.0, 1.0, 0.0, 1.0, 1.0];
        let x3: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a - 2.0 * b).collect();
        let y = vec![1.0, 3.0, 2.0, 5.0, 4.0];
        let err = ols_fit(&[x1.clone(), x2, x3], &names(3), &y).unwrap_err().to_string();
        assert!(err.contains("x3 is a linear combination of {x1, x2}"), "{err}");

        let constant = vec![2.0; 5];
        let err = ols_fit(&[x1.clone(), constant], &names(2), &y).unwrap_err().to_string();
        assert!(err.contains("x2 is a linear combination of {(intercept)}"), "{err}");

        let zero = vec![0.0; 5];
        let err = ols_fit(&[zero, x1], &names(2), &y).unwrap_err().to_string();
        assert!(err.contains("x1 is identically zero"), "{err}");
    }

    #[test]
    fn too_few_rows_and_constant_outcome() {
        let x = vec![1.0, 2.0];
        assert!(ols_fit(&[x], &names(1), &[1.0, 2.0]).is_err());
        assert!(ols_fit(&[vec![1.0, 2.0, 3.0]], &names(1), &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn intercept_only_model() {
        let fit = ols_fit(&[], &[], &[1.0, 2.0, 6.0]).unwrap();
        assert_abs_diff_eq!(fit.intercept(), 3.0, epsilon = 1e-12);
        assert_eq!((fit.r2, fit.f, fit.p, fit.df_model, fit.df_resid), (0.0, 0.0, 1.0, 0, 2));
    }
}
