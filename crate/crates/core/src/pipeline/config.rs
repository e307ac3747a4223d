//! Run configuration, read from a single TOML file.
//!
//! ```toml
//! [corpus]
//! path = "dialogues.jsonl"
//! format = "canonical"          # or "release"
//!
//! [affect]
//! scores = "scores.jsonl"       # optional; lexicon and emoticons default to the built-in ones
//!
//! [exclusions]
//! preset = "sparse_levels"      # none | age | sparse_levels
//! file = "exclusions.toml"      # optional, replaces the preset
//!
//! [analysis]
//! alpha0 = 500.0
//! tie_policy = "drop"           # or "priority", ordered by tie_priority
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::affect::Method;
use crate::corpus::{ExclusionPolicy, Variable};
use crate::error::{Error, Result};
use crate::lexcorr::{TiePolicy, DEFAULT_ALPHA0, DEFAULT_MIN_COUNT};
use crate::stats::TTestVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    #[default]
    Canonical,
    Release,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: CorpusFormat,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffectConfig {
    pub lexicon: Option<PathBuf>,
    pub emoticons: Option<PathBuf>,
    pub scores: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionPreset {
    None,
    Age,
    #[default]
    SparseLevels,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionConfig {
    #[serde(default)]
    pub preset: ExclusionPreset,
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub methods: Vec<Method>,
    pub outcomes: Vec<String>,
    /// Step-1 variables; categorical ones expand to indicator columns.
    pub individual_difference: Vec<String>,
    /// Reference level per categorical variable; the most frequent level otherwise.
    pub reference_levels: BTreeMap<String, String>,
    pub t_test: TTestVariant,
    pub alpha0: f64,
    pub tie_policy: String,
    pub tie_priority: Vec<String>,
    pub min_count: u64,
    pub top_k: usize,
    pub samples_k: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            methods: Method::ALL.to_vec(),
            outcomes: vec!["satisfaction".into(), "likeness".into()],
            individual_difference: [
                "age",
                "education",
                "gender",
                "ethnicity",
                "svo",
                "extraversion",
                "agreeableness",
                "conscientiousness",
                "emotional_stability",
                "openness",
            ]
            .map(String::from)
            .to_vec(),
            reference_levels: BTreeMap::new(),
            t_test: TTestVariant::default(),
            alpha0: DEFAULT_ALPHA0,
            tie_policy: "drop".into(),
            tie_priority: Vec::new(),
            min_count: DEFAULT_MIN_COUNT,
            top_k: 5,
            samples_k: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<ReportFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            formats: vec![ReportFormat::Csv, ReportFormat::Markdown],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusConfig,
    #[serde(default)]
    pub affect: AffectConfig,
    #[serde(default)]
    pub exclusions: ExclusionConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    /// Defaults around a corpus file.
    pub fn new(corpus: impl Into<PathBuf>, format: CorpusFormat) -> Self {
        RunConfig {
            corpus: CorpusConfig {
                path: corpus.into(),
                format,
            },
            affect: AffectConfig::default(),
            exclusions: ExclusionConfig::default(),
            analysis: AnalysisConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::schema(origin, e.message()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file and resolves its relative paths.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text, &path.display().to_string())?;
        let base = path.parent().unwrap_or(Path::new("."));
        resolve(base, &mut cfg.corpus.path);
        for p in [&mut cfg.affect.lexicon, &mut cfg.affect.emoticons, &mut cfg.affect.scores, &mut cfg.exclusions.file]
            .into_iter()
            .flatten()
        {
            resolve(base, p);
        }
        resolve(base, &mut cfg.output.dir);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.analysis;
        if a.methods.is_empty() {
            return Err(Error::Config("analysis.methods must not be empty".into()));
        }
        for o in &a.outcomes {
            if !matches!(o.as_str(), "satisfaction" | "likeness") {
                return Err(Error::Config(format!(
                    "unknown outcome {o:?}; expected satisfaction or likeness"
                )));
            }
        }
        for name in &a.individual_difference {
            match Variable::from_name(name) {
                Some(Variable::Satisfaction | Variable::Likeness) => {
                    return Err(Error::Config(format!("{name} is an outcome, not a predictor")))
                }
                Some(_) => {}
                None => return Err(Error::Config(format!("unknown predictor {name:?} in individual_difference"))),
            }
        }
        for (var, level) in &a.reference_levels {
            let v = Variable::from_name(var)
                .filter(|v| v.is_categorical())
                .ok_or_else(|| Error::Config(format!("reference_levels: {var:?} is not a categorical variable")))?;
            if !v.levels().contains(&level.as_str()) {
                return Err(Error::Config(format!(
                    "reference_levels: {level:?} is not a level of {var} ({:?})",
                    v.levels()
                )));
            }
        }
        if !(a.alpha0 > 0.0 && a.alpha0.is_finite()) {
            return Err(Error::Config(format!("alpha0 must be positive (got {})", a.alpha0)));
        }
        self.tie_policy()?;
        Ok(())
    }

    pub fn tie_policy(&self) -> Result<TiePolicy> {
        match self.analysis.tie_policy.as_str() {
            "drop" => Ok(TiePolicy::Drop),
            "priority" => Ok(TiePolicy::Priority(self.analysis.tie_priority.clone())),
            other => Err(Error::Config(format!(
                "tie_policy must be \"drop\" or \"priority\" (got {other:?})"
            ))),
        }
    }

    pub fn exclusion_policy(&self) -> Result<ExclusionPolicy> {
        if let Some(file) = &self.exclusions.file {
            return ExclusionPolicy::load(file);
        }
        Ok(match self.exclusions.preset {
            ExclusionPreset::None => ExclusionPolicy::default(),
            ExclusionPreset::Age => ExclusionPolicy::age_only(),
            ExclusionPreset::SparseLevels => ExclusionPolicy::sparse_levels(),
        })
    }

    pub fn individual_variables(&self) -> Vec<Variable> {
        self.analysis
            .individual_difference
            .iter()
            .filter_map(|n| Variable::from_name(n))
            .collect()
    }

    pub fn reference_level(&self, var: Variable) -> Option<&str> {
        self.analysis.reference_levels.get(var.name()).map(String::as_str)
    }

    pub fn wants(&self, format: ReportFormat) -> bool {
        self.output.formats.contains(&format)
    }

    /// SHA-256 of the serialized configuration, ignoring the output directory.
    pub fn sha256(&self) -> String {
        let mut c = self.clone();
        c.output.dir = PathBuf::new();
        let text = toml::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
