use std::collections::BTreeMap;

use proptest::prelude::*;

use negaffect::affect::{utterance_affect, EmoticonConfig, Lexicon, Method};
use negaffect::lexcorr::{log_odds_dirichlet, log_odds_pair, LabelSet, LabeledUtterance, TiePolicy, TokenStats};
use negaffect::stats::{
    anova_oneway, f_cdf, f_sf, inc_beta, ols_fit, pearson, t_cdf, t_test, t_two_tailed, TTestVariant,
};

fn names(k: usize) -> Vec<String> {
    (0..k).map(|j| format!("x{j}")).collect()
}

/// Design columns plus an outcome with noise so the fit is never exact.
fn design() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..=4, 12usize..=40).prop_flat_map(|(k, n)| {
        (
            prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), k),
            prop::collection::vec(-10.0f64..10.0, n),
        )
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ols_residuals_are_orthogonal_to_the_design((cols, y) in design()) {
        let fit = ols_fit(&cols, &names(cols.len()), &y).unwrap();
        for ((f, e), v) in fit.fitted.iter().zip(&fit.residuals).zip(&y) {
            prop_assert!(close(f + e, *v, 1e-12));
        }
        let scale: f64 = y.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
        prop_assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-9 * scale);
        for c in &cols {
            let dot: f64 = c.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() < 1e-8 * scale * 10.0, "x'e = {dot}");
        }
    }

    #[test]
    fn ols_r2_is_squared_fit_correlation((cols, y) in design()) {
        let fit = ols_fit(&cols, &names(cols.len()), &y).unwrap();
        let r = pearson(&fit.fitted, &y).unwrap().r;
        prop_assert!(close(fit.r2, r * r, 1e-9));
        prop_assert!((0.0..=1.0).contains(&fit.r2));
    }

    #[test]
    fn ols_is_scale_and_shift_equivariant((cols, y) in design(), c in 0.1f64..20.0, shift in -5.0f64..5.0) {
        let base = ols_fit(&cols, &names(cols.len()), &y).unwrap();
        let mut scaled = cols.clone();
        for v in &mut scaled[0] {
            *v *= c;
        }
        let ys: Vec<f64> = y.iter().map(|v| v + shift).collect();
        let fit = ols_fit(&scaled, &names(cols.len()), &ys).unwrap();
        prop_assert!(close(fit.r2, base.r2, 1e-9));
        prop_assert!(close(fit.coefficients[1] * c, base.coefficients[1], 1e-7));
        prop_assert!(close(fit.intercept(), base.intercept() + shift, 1e-7));
        for j in 2..fit.coefficients.len() {
            prop_assert!(close(fit.coefficients[j], base.coefficients[j], 1e-7));
        }
    }

    #[test]
    fn pearson_is_affine_invariant(
        xy in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 4..40),
        a in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0],
        b in -100.0f64..100.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        prop_assume!(pearson(&x, &y).is_ok());
        let base = pearson(&x, &y).unwrap();
        let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let moved = pearson(&xt, &y).unwrap();
        prop_assert!(close(moved.r, a.signum() * base.r, 1e-9));
        prop_assert!(close(moved.p, base.p, 1e-6));
        prop_assert!((-1.0..=1.0).contains(&base.r));
    }

    #[test]
    fn t_cdf_is_monotone_and_symmetric(t1 in -30.0f64..30.0, t2 in -30.0f64..30.0, df in 1.0f64..500.0) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(t_cdf(lo, df).unwrap() <= t_cdf(hi, df).unwrap() + 1e-15);
        prop_assert!(close(t_cdf(-t1, df).unwrap(), 1.0 - t_cdf(t1, df).unwrap(), 1e-12));
        let p = t_two_tailed(t1, df).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn f_cdf_is_monotone_and_complements_sf(
        f1 in 0.0f64..40.0, f2 in 0.0f64..40.0, d1 in 1.0f64..60.0, d2 in 1.0f64..2000.0,
    ) {
        let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        prop_assert!(f_cdf(lo, d1, d2).unwrap() <= f_cdf(hi, d1, d2).unwrap() + 1e-15);
        prop_assert!(close(f_cdf(f1, d1, d2).unwrap() + f_sf(f1, d1, d2).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn incomplete_beta_reflects(a in 0.1f64..50.0, b in 0.1f64..50.0, x in 0.0f64..=1.0) {
        let l = inc_beta(a, b, x).unwrap();
        let r = inc_beta(b, a, 1.0 - x).unwrap();
        prop_assert!((l + r - 1.0).abs() < 1e-10, "{l} + {r}");
    }

    #[test]
    fn squared_t_is_f_with_one_numerator_df(t in -20.0f64..20.0, df in 1.0f64..3000.0) {
        let a = t_two_tailed(t, df).unwrap();
        let b = f_sf(t * t, 1.0, df).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn pooled_t_squared_equals_two_group_anova(
        g1 in prop::collection::vec(-20.0f64..20.0, 2..15),
        g2 in prop::collection::vec(-20.0f64..20.0, 2..15),
    ) {
        let t = t_test(&g1, &g2, TTestVariant::Pooled).unwrap();
        let f = anova_oneway(&[g1, g2]).unwrap();
        prop_assume!(t.t.is_finite());
        prop_assert!(close(t.t * t.t, f.f, 1e-9));
        prop_assert!((t.p - f.p).abs() < 1e-9);
    }

    #[test]
    fn log_odds_is_antisymmetric(
        yi in 0u32..200, yj in 0u32..200, extra_i in 1u32..500, extra_j in 1u32..500,
        alpha0 in 0.5f64..1000.0, frac in 0.001f64..0.5,
    ) {
        let (ni, nj) = (f64::from(yi + extra_i), f64::from(yj + extra_j));
        let aw = alpha0 * frac;
        let (d1, v1) = log_odds_pair(yi.into(), ni, yj.into(), nj, aw, alpha0);
        let (d2, v2) = log_odds_pair(yj.into(), nj, yi.into(), ni, aw, alpha0);
        prop_assert!(close(d1, -d2, 1e-12));
        prop_assert_eq!(v1, v2);
        prop_assert!(v1 > 0.0);
    }

    #[test]
    fn log_odds_grows_with_the_target_count(
        yi in 0u32..100, yj in 0u32..100, alpha0 in 0.5f64..1000.0, frac in 0.001f64..0.5,
    ) {
        let (ni, nj) = (400.0, 400.0);
        let aw = alpha0 * frac;
        let (lo, _) = log_odds_pair(yi.into(), ni, yj.into(), nj, aw, alpha0);
        let (hi, _) = log_odds_pair(f64::from(yi) + 1.0, ni, yj.into(), nj, aw, alpha0);
        prop_assert!(hi > lo);
    }

    #[test]
    fn a_dominant_prior_shrinks_log_odds_to_zero(
        yi in 0u32..100, yj in 0u32..100, frac in 0.001f64..0.5,
    ) {
        let (ni, nj) = (f64::from(yi) + 300.0, f64::from(yj) + 300.0);
        let weak = log_odds_pair(yi.into(), ni, yj.into(), nj, 10.0 * frac, 10.0).0;
        // |δ| shrinks like y / α_w, so keep α_w well above every count
        let strong = 1e12;
        let shrunk = log_odds_pair(yi.into(), ni, yj.into(), nj, strong * frac, strong).0;
        prop_assert!(shrunk.abs() < 1e-5);
        prop_assert!(shrunk.abs() <= weak.abs() + 1e-12);
    }

    #[test]
    fn labeled_tokens_are_counted_once(
        texts in prop::collection::vec(
            prop::collection::vec(prop::sample::select(vec!["good", "sad", "mad", "worried", "water", "food", ":)", ":("]), 0..8),
            1..25,
        ),
        picks in prop::collection::vec(prop::option::of(0usize..4), 25),
    ) {
        let emoticons = EmoticonConfig::builtin();
        let lexicon = Lexicon::builtin();
        let affect: Vec<_> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| utterance_affect(&format!("u{i}"), &t.join(" "), &emoticons, &lexicon))
            .collect();
        let labels = LabelSet {
            method: Method::Lexicon,
            tie_policy: TiePolicy::Drop,
            labels: affect
                .iter()
                .zip(&picks)
                .map(|(a, &label)| LabeledUtterance {
                    utterance_id: a.utterance_id.clone(),
                    method: Method::Lexicon,
                    label,
                    confidence: None,
                })
                .collect(),
            ties: 0,
        };
        let stats = TokenStats::from_labels(&affect, &labels).unwrap();
        let labeled_words: u64 = affect
            .iter()
            .zip(&picks)
            .filter(|(_, l)| l.is_some())
            .map(|(a, _)| a.words.len() as u64)
            .sum();
        prop_assert_eq!(stats.totals.iter().sum::<u64>(), labeled_words);
        prop_assert_eq!(stats.background_total, labeled_words);
        let per_token: u64 = stats.counts.values().flat_map(|v| v.iter()).sum();
        prop_assert_eq!(per_token, labeled_words);
        for (c, _) in stats.categories.iter().enumerate() {
            if stats.totals[c] > 0 {
                prop_assert!(log_odds_dirichlet(&stats, c, 50.0).is_ok());
            }
        }
    }
}

#[test]
fn two_category_log_odds_mirror_each_other() {
    let mut counts = BTreeMap::new();
    counts.insert("a".to_string(), vec![3, 1]);
    counts.insert("b".to_string(), vec![1, 3]);
    let stats = TokenStats::from_counts(vec!["x".into(), "y".into()], counts).unwrap();
    let x = log_odds_dirichlet(&stats, 0, 10.0).unwrap();
    let y = log_odds_dirichlet(&stats, 1, 10.0).unwrap();
    let dx: BTreeMap<_, _> = x.iter().map(|e| (e.token.clone(), e.delta)).collect();
    for e in &y {
        assert!((e.delta + dx[&e.token]).abs() < 1e-12);
    }
}
