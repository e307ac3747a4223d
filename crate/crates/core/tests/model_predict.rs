use negaffect::affect::{AffectProfile, EmoticonConfig, Lexicon, Method};
use negaffect::corpus::{Corpus, Variable};
use negaffect::pipeline::{
    Coefficient, CorpusFormat, FittedPredictor, ModelProvenance, RunConfig, Session, PARTNER_PREFIX, SCHEMA_VERSION,
};
use negaffect::stats::{hierarchical_fit, ols_fit};
use negaffect::synthetic::{generate, SyntheticSpec};
use negaffect::Execution;

fn session(seed: u64, dialogues: usize) -> Session {
    let data = generate(&SyntheticSpec::small(dialogues, seed)).unwrap();
    let mut cfg = RunConfig::new("unused.jsonl", CorpusFormat::Canonical);
    cfg.analysis.individual_difference = vec!["age".into(), "gender".into(), "agreeableness".into()];
    Session::from_parts(
        cfg,
        data.corpus,
        EmoticonConfig::builtin(),
        Lexicon::builtin(),
        Some(data.scores),
        Execution::Sequential,
    )
    .unwrap()
}

/// Looks a predictor up straight from the corpus and profiles.
fn lookup(corpus: &Corpus, profiles: &[AffectProfile], dialogue: &str, agent: usize, name: &str) -> f64 {
    let d = corpus.dialogues.iter().find(|d| d.dialogue_id == dialogue).unwrap();
    let own = profiles.iter().find(|p| p.dialogue_id == dialogue && p.agent.index() == agent).unwrap();
    let partner = profiles.iter().find(|p| p.dialogue_id == dialogue && p.agent.index() != agent).unwrap();
    if let Some(col) = name.strip_prefix(PARTNER_PREFIX) {
        return partner.feature(col).unwrap().unwrap();
    }
    if let Some(v) = own.feature(name) {
        return v.unwrap();
    }
    let person = d.participant(own.agent);
    if let Some((var, level)) = name.strip_suffix(']').and_then(|n| n.split_once('[')) {
        let var = Variable::from_name(var).unwrap();
        return f64::from(*person.level(var).unwrap().value().unwrap() == level);
    }
    *person.numeric(Variable::from_name(name).unwrap()).unwrap().value().unwrap()
}

#[test]
fn held_out_prediction_is_the_dot_product() {
    let train = session(11, 150);
    let model = train.fit("satisfaction", Method::Lexicon).unwrap();
    assert_eq!(model.coefficients.len(), 1 + 1 + 1 + 4 + 4);
    let reloaded = FittedPredictor::parse(&model.to_json(), "mem").unwrap();
    assert_eq!(reloaded, model);

    let test = session(12, 20);
    let profiles = test.profiles().unwrap();
    let preds = test.predict(&reloaded).unwrap();
    assert_eq!(preds.len(), 40);
    for p in &preds {
        let mut want = model.intercept;
        for c in &model.coefficients {
            want += c.value * lookup(&test.corpus, &profiles, &p.dialogue_id, p.agent.index(), &c.name);
        }
        let got = p.predicted.unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
    }
}

#[test]
fn in_sample_predictions_reproduce_fitted_values() {
    let s = session(5, 90);
    let analysis = s.analysis().unwrap();
    let res = hierarchical_fit(&analysis.table, &analysis.layout.blocks(Method::Contextual), "likeness").unwrap();
    let model = s.fit("likeness", Method::Contextual).unwrap();
    assert_eq!(model.training_n, res.n());
    let preds = s.predict(&model).unwrap();
    for (id, fitted) in res.row_ids.iter().zip(&res.last().fitted) {
        let p = preds.iter().find(|p| (&p.dialogue_id, p.agent) == (&id.0, id.1)).unwrap();
        assert_eq!(p.predicted.unwrap(), *fitted);
    }
}

#[test]
fn zero_coefficient_model_predicts_its_intercept() {
    let s = session(7, 10);
    let model = FittedPredictor {
        schema_version: SCHEMA_VERSION,
        outcome: "satisfaction".into(),
        method: Method::Emoticon,
        intercept: 4.0,
        coefficients: Method::Emoticon
            .columns()
            .into_iter()
            .map(|name| Coefficient { name, value: 0.0 })
            .collect(),
        training_n: 10,
        training_r2: 0.0,
        provenance: ModelProvenance {
            config_sha256: "x".into(),
            corpus_sha256: "y".into(),
        },
    };
    let preds = s.predict(&model).unwrap();
    assert_eq!(preds.len(), 20);
    assert!(preds.iter().all(|p| p.predicted == Some(4.0) && p.clamped() == Some(4.0)));
}

#[test]
fn exact_linear_data_is_predicted_exactly() {
    let x1: Vec<f64> = (0..12).map(|i| i as f64).collect();
    let x2: Vec<f64> = (0..12).map(|i| ((i * 7) % 5) as f64).collect();
    let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| 1.5 + 0.25 * a - 0.5 * b).collect();
    let names = vec!["emoticon_joy".to_string(), "emoticon_anger".to_string()];
    let fit = ols_fit(&[x1.clone(), x2.clone()], &names, &y).unwrap();
    assert!((fit.r2 - 1.0).abs() < 1e-12);
    let prov = ModelProvenance {
        config_sha256: "c".into(),
        corpus_sha256: "d".into(),
    };
    let m = FittedPredictor::from_fit(&fit, "satisfaction", Method::Emoticon, prov);
    for i in 0..12 {
        assert!((m.predict_values(&[x1[i], x2[i]]) - y[i]).abs() < 1e-12);
    }
}

#[test]
fn contextual_model_without_scores_names_the_missing_columns() {
    let with = session(3, 40);
    let model = with.fit("satisfaction", Method::Contextual).unwrap();
    let mut without = session(3, 40);
    without.scores = None;
    let msg = without.predict(&model).unwrap_err().to_string();
    assert!(msg.contains("contextual_joy") && msg.contains("partner_contextual_surprise"), "{msg}");
}
