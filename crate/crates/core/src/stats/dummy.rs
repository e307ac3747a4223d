use crate::error::{Error, Result};

/// Indicator columns for one categorical variable.
#[derive(Debug, Clone, PartialEq)]
pub struct DummyCoding {
    pub reference: String,
    /// One column per non-reference level, in level order.
    pub levels: Vec<String>,
    /// Row-wise indicators; `None` where the value is missing.
    pub rows: Vec<Option<Vec<f64>>>,
}

impl DummyCoding {
    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.as_ref().map(|v| v[j])).collect()
    }
}

/// Most frequent present level; ties go to the earlier level.
pub fn most_frequent<'a>(values: &[Option<&str>], levels: &[&'a str]) -> Option<&'a str> {
    let mut best: Option<(&str, usize)> = None;
    for &level in levels {
        let n = values.iter().filter(|v| **v == Some(level)).count();
        if n > 0 && best.is_none_or(|(_, m)| n > m) {
            best = Some((level, n));
        }
    }
    best.map(|(l, _)| l)
}

pub fn dummy_code(values: &[Option<&str>], levels: &[&str], reference: &str) -> Result<DummyCoding> {
    if !levels.contains(&reference) {
        return Err(Error::Config(format!(
            "reference level {reference:?} is not one of {levels:?}"
        )));
    }
    let kept: Vec<&str> = levels.iter().copied().filter(|l| *l != reference).collect();
    let mut rows = Vec::with_capacity(values.len());
    for v in values {
        rows.push(match v {
            None => None,
            Some(v) if !levels.contains(v) => {
                return Err(Error::Numerical(format!("value {v:?} is not one of {levels:?}")))
            }
            Some(v) => Some(kept.iter().map(|l| if l == v { 1.0 } else { 0.0 }).collect()),
        });
    }
    Ok(DummyCoding {
        reference: reference.to_string(),
        levels: kept.into_iter().map(String::from).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gender_example() {
        let vals = [Some("F"), Some("M"), Some("O"), None];
        let d = dummy_code(&vals, &["F", "M", "O"], "F").unwrap();
        assert_eq!(d.levels, ["M", "O"]);
        assert_eq!(d.rows[0], Some(vec![0.0, 0.0]));
        assert_eq!(d.rows[1], Some(vec![1.0, 0.0]));
        assert_eq!(d.rows[2], Some(vec![0.0, 1.0]));
        assert_eq!(d.rows[3], None);
    }

    #[test]
    fn single_level_gives_no_columns() {
        let d = dummy_code(&[Some("x"), Some("x")], &["x"], "x").unwrap();
        assert!(d.levels.is_empty());
        assert_eq!(d.rows[0], Some(vec![]));
    }

    #[test]
    fn column_sums_are_level_frequencies() {
        let vals: Vec<Option<&str>> = "abcabbacbbd"
            .chars()
            .map(|c| match c {
                'a' => Some("a"),
                'b' => Some("b"),
                'c' => Some("c"),
                _ => None,
            })
            .collect();
        let d = dummy_code(&vals, &["a", "b", "c"], "b").unwrap();
        let sums: Vec<f64> = (0..2).map(|j| d.column(j).iter().flatten().sum()).collect();
        // counted by hand: a ×3, c ×2
        assert_eq!(sums, [3.0, 2.0]);
        assert_eq!(most_frequent(&vals, &["a", "b", "c"]), Some("b"));
    }

    #[test]
    fn errors() {
        assert!(dummy_code(&[Some("z")], &["a", "b"], "a").is_err());
        assert!(dummy_code(&[Some("a")], &["a", "b"], "q").is_err());
    }
}
