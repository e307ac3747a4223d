use super::special::t_two_tailed;
use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean and sample (n − 1) standard deviation.
pub fn mean_std(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::Numerical(format!(
            "standard deviation needs at least 2 values (got {})",
            values.len()
        )));
    }
    let m = mean(values).unwrap();
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    Ok((m, (ss / (values.len() - 1) as f64).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    /// Two-tailed, from t = r·sqrt((n−2)/(1−r²)) on n − 2 df.
    pub p: f64,
    pub n: usize,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::Numerical(format!(
            "pearson: length mismatch ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Numerical(format!("pearson needs n >= 3 (got {n})")));
    }
    let mx = mean(x).unwrap();
    let my = mean(y).unwrap();
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Numerical("pearson: zero variance, r is undefined".into()));
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if r.abs() == 1.0 {
        0.0
    } else {
        t_two_tailed(r * (df / (1.0 - r * r)).sqrt(), df)?
    };
    Ok(Correlation { r, p, n })
}

/// Keeps positions where both values are present.
pub fn pairwise_complete(x: &[Option<f64>], y: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    x.iter()
        .zip(y)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mean_std_examples() {
        assert_eq!(mean_std(&[4.0, 4.0, 4.0]).unwrap(), (4.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        // sqrt(5/3)
        assert_abs_diff_eq!(s, 1.290_994_448_735_805_6, epsilon = 1e-15);
        assert!(mean_std(&[1.0]).is_err());
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let c = pearson(&x, &x).unwrap();
        assert_abs_diff_eq!(c.r, 1.0, epsilon = 1e-14);
        assert!(c.p < 1e-10);
        let c = pearson(&x, &[-1.0, -2.0, -3.0, -4.0]).unwrap();
        assert_abs_diff_eq!(c.r, -1.0, epsilon = 1e-14);
        assert!(c.p < 1e-10);
        // scipy.stats.pearsonr
        let c = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
        assert_abs_diff_eq!(c.r, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(c.p, 0.104_088_038_661_827_99, epsilon = 1e-10);
    }

    #[test]
    fn pearson_errors() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn pairwise() {
        let (a, b) = pairwise_complete(&[Some(1.0), None, Some(3.0)], &[Some(2.0), Some(5.0), None]);
        assert_eq!((a, b), (vec![1.0], vec![2.0]));
    }
}
