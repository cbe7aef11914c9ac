use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embedding::{SkipGramParams, DEFAULT_CUTOFF, DEFAULT_SEEDS};
use crate::error::{Error, Result};
use crate::related::DEFAULT_WINDOW;
use crate::topic::{LdaConfig, Weighting, DEFAULT_MIN_DOC_FREQ, DEFAULT_THRESHOLD, DEFAULT_TOP_N};

/// Every knob of a full run. Optional file paths fall back to the bundled data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub store: PathBuf,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub embedding: SkipGramParams,
    pub keyword_seeds: Vec<String>,
    pub cutoff: f64,
    pub lda: LdaConfig,
    pub weighting: Weighting,
    pub min_doc_freq: usize,
    pub top_n: usize,
    pub threshold: f64,
    pub window: usize,
    pub day_first: bool,
    pub patterns: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub verbs: Option<PathBuf>,
    /// Annotator files for scoring the relevance filter.
    pub relevance_gold: Vec<PathBuf>,
    pub relations_gold: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            store: PathBuf::from("store"),
            out_dir: PathBuf::from("out"),
            seed: 42,
            embedding: SkipGramParams::default(),
            keyword_seeds: DEFAULT_SEEDS.iter().map(|s| s.to_string()).collect(),
            cutoff: DEFAULT_CUTOFF,
            lda: LdaConfig::default(),
            weighting: Weighting::Counts,
            min_doc_freq: DEFAULT_MIN_DOC_FREQ,
            top_n: DEFAULT_TOP_N,
            threshold: DEFAULT_THRESHOLD,
            window: DEFAULT_WINDOW,
            day_first: true,
            patterns: None,
            gazetteer: None,
            stopwords: None,
            verbs: None,
            relevance_gold: Vec::new(),
            relations_gold: None,
        }
    }
}

/// A config field that would stop the run, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub field: String,
    pub reason: String,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::InvalidConfig(format!("{key} = {value:?}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::InvalidConfig(format!("{key} = {value:?}: expected true or false"))),
    }
}

fn optional_path(value: &str, base: &Path) -> Option<PathBuf> {
    (!value.is_empty() && value != "-").then(|| base.join(value))
}

impl PipelineConfig {
    pub const KEYS: &'static [&'static str] = &[
        "store",
        "out_dir",
        "seed",
        "embedding.dim",
        "embedding.window",
        "embedding.negative",
        "embedding.epochs",
        "embedding.learning_rate",
        "embedding.min_count",
        "keywords.seeds",
        "keywords.cutoff",
        "lda.k",
        "lda.alpha",
        "lda.eta",
        "lda.passes",
        "lda.weights",
        "lda.min_doc_freq",
        "topics.top_n",
        "topics.threshold",
        "window",
        "day_first",
        "patterns",
        "gazetteer",
        "stopwords",
        "verbs",
        "gold.relevance",
        "gold.relations",
    ];

    /// Sets one key. Relative paths are taken relative to `base`.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "store" => self.store = base.join(v),
            "out_dir" => self.out_dir = base.join(v),
            "seed" => self.seed = parse_value(key, v)?,
            "embedding.dim" => self.embedding.dim = parse_value(key, v)?,
            "embedding.window" => self.embedding.window = parse_value(key, v)?,
            "embedding.negative" => self.embedding.negative = parse_value(key, v)?,
            "embedding.epochs" => self.embedding.epochs = parse_value(key, v)?,
            "embedding.learning_rate" => self.embedding.learning_rate = parse_value(key, v)?,
            "embedding.min_count" => self.embedding.min_count = parse_value(key, v)?,
            "keywords.seeds" => {
                self.keyword_seeds = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
            }
            "keywords.cutoff" => self.cutoff = parse_value(key, v)?,
            "lda.k" => self.lda.k = parse_value(key, v)?,
            "lda.alpha" => self.lda.alpha = parse_value(key, v)?,
            "lda.eta" => self.lda.eta = parse_value(key, v)?,
            "lda.passes" => self.lda.passes = parse_value(key, v)?,
            "lda.weights" => self.weighting = parse_value(key, v)?,
            "lda.min_doc_freq" => self.min_doc_freq = parse_value(key, v)?,
            "topics.top_n" => self.top_n = parse_value(key, v)?,
            "topics.threshold" => self.threshold = parse_value(key, v)?,
            "window" => self.window = parse_value(key, v)?,
            "day_first" => self.day_first = parse_bool(key, v)?,
            "patterns" => self.patterns = optional_path(v, base),
            "gazetteer" => self.gazetteer = optional_path(v, base),
            "stopwords" => self.stopwords = optional_path(v, base),
            "verbs" => self.verbs = optional_path(v, base),
            "gold.relevance" => {
                self.relevance_gold = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| base.join(s)).collect()
            }
            "gold.relations" => self.relations_gold = optional_path(v, base),
            other => return Err(Error::InvalidConfig(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` override; relative paths resolve against the working directory.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("override {assignment:?} is not key=value")))?;
        self.set(k, v, Path::new(""))
    }

    /// Parses `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let base = source.parent().unwrap_or(Path::new(""));
        let mut cfg = PipelineConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { path: source.display().to_string(), line: n + 1, message };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            cfg.set(k, v, base).map_err(|e| err(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Renders the config in its own file format.
    pub fn to_kv(&self) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or("-".to_string(), |p| p.display().to_string());
        let e = &self.embedding;
        let lines = [
            ("store", self.store.display().to_string()),
            ("out_dir", self.out_dir.display().to_string()),
            ("seed", self.seed.to_string()),
            ("embedding.dim", e.dim.to_string()),
            ("embedding.window", e.window.to_string()),
            ("embedding.negative", e.negative.to_string()),
            ("embedding.epochs", e.epochs.to_string()),
            ("embedding.learning_rate", e.learning_rate.to_string()),
            ("embedding.min_count", e.min_count.to_string()),
            ("keywords.seeds", self.keyword_seeds.join(",")),
            ("keywords.cutoff", self.cutoff.to_string()),
            ("lda.k", self.lda.k.to_string()),
            ("lda.alpha", self.lda.alpha.to_string()),
            ("lda.eta", self.lda.eta.to_string()),
            ("lda.passes", self.lda.passes.to_string()),
            ("lda.weights", self.weighting.to_string()),
            ("lda.min_doc_freq", self.min_doc_freq.to_string()),
            ("topics.top_n", self.top_n.to_string()),
            ("topics.threshold", self.threshold.to_string()),
            ("window", self.window.to_string()),
            ("day_first", self.day_first.to_string()),
            ("patterns", path(&self.patterns)),
            ("gazetteer", path(&self.gazetteer)),
            ("stopwords", path(&self.stopwords)),
            ("verbs", path(&self.verbs)),
            (
                "gold.relevance",
                self.relevance_gold.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","),
            ),
            ("gold.relations", path(&self.relations_gold)),
        ];
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Every problem that would stop `config` from running; empty iff runnable.
pub fn validate_config(config: &PipelineConfig) -> Vec<Problem> {
    let mut out = Vec::new();
    let mut problem = |field: &str, reason: String| out.push(Problem { field: field.into(), reason });

    if !config.store.join(crate::corpus::ARTICLES_FILE).is_file() {
        problem("store", format!("no {} in {}", crate::corpus::ARTICLES_FILE, config.store.display()));
    }
    let e = &config.embedding;
    if e.dim < 2 {
        problem("embedding.dim", "dim must be >= 2".into());
    }
    if e.window == 0 {
        problem("embedding.window", "window must be >= 1".into());
    }
    if e.epochs == 0 {
        problem("embedding.epochs", "epochs must be >= 1".into());
    }
    if !(e.learning_rate > 0.0 && e.learning_rate.is_finite()) {
        problem("embedding.learning_rate", "learning_rate must be > 0".into());
    }
    if e.min_count == 0 {
        problem("embedding.min_count", "min_count must be >= 1".into());
    }
    if config.keyword_seeds.is_empty() {
        problem("keywords.seeds", "at least one seed word is required".into());
    }
    if !(config.cutoff > 0.0 && config.cutoff <= 1.0) {
        problem("keywords.cutoff", "cutoff outside (0,1]".into());
    }
    if config.lda.k < 2 {
        problem("lda.k", "K must be >= 2".into());
    }
    if !(config.lda.alpha > 0.0 && config.lda.alpha.is_finite()) {
        problem("lda.alpha", "alpha must be > 0".into());
    }
    if !(config.lda.eta > 0.0 && config.lda.eta.is_finite()) {
        problem("lda.eta", "eta must be > 0".into());
    }
    if config.lda.passes == 0 {
        problem("lda.passes", "passes must be >= 1".into());
    }
    if config.min_doc_freq == 0 {
        problem("lda.min_doc_freq", "min_doc_freq must be >= 1".into());
    }
    if config.top_n == 0 {
        problem("topics.top_n", "top_n must be >= 1".into());
    }
    if !(config.threshold > 0.0 && config.threshold <= 1.0) {
        problem("topics.threshold", "threshold outside (0,1]".into());
    }
    for (field, path, dir) in [
        ("patterns", &config.patterns, false),
        ("gazetteer", &config.gazetteer, true),
        ("stopwords", &config.stopwords, false),
        ("verbs", &config.verbs, false),
        ("gold.relations", &config.relations_gold, false),
    ] {
        if let Some(p) = path {
            let ok = if dir { p.is_dir() } else { p.is_file() };
            if !ok {
                problem(field, format!("{} does not exist", p.display()));
            }
        }
    }
    for p in &config.relevance_gold {
        if !p.is_file() {
            problem("gold.relevance", format!("{} does not exist", p.display()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runnable() -> (tempfile::TempDir, PipelineConfig) {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("articles.jsonl"), "").unwrap();
        let cfg = PipelineConfig { store: dir.path().to_path_buf(), ..Default::default() };
        (dir, cfg)
    }

    #[test]
    fn default_parameters_validate() {
        let (_d, mut cfg) = runnable();
        for kv in ["keywords.cutoff=0.68", "lda.alpha=0.0067", "lda.eta=6.89", "lda.passes=20"] {
            cfg.apply_override(kv).unwrap();
        }
        assert_eq!(validate_config(&cfg), []);
    }

    #[test]
    fn bad_values_reported() {
        let (_d, mut cfg) = runnable();
        cfg.cutoff = 1.5;
        cfg.lda.alpha = 0.0;
        cfg.patterns = Some("/nonexistent/patterns.txt".into());
        let problems = validate_config(&cfg);
        let reasons: Vec<String> = problems.iter().map(|p| p.reason.clone()).collect();
        assert!(reasons.contains(&"cutoff outside (0,1]".to_string()));
        assert!(reasons.contains(&"alpha must be > 0".to_string()));
        assert!(problems.iter().any(|p| p.field == "patterns"));
        assert_eq!(problems.len(), 3);
    }

    #[test]
    fn parse_and_round_trip() {
        let text = "# run\nstore = corpus\nseed = 7\nkeywords.seeds = protest, bandh\nlda.weights = tfidf\npatterns = -\n";
        let cfg = PipelineConfig::parse(text, Path::new("/etc/unrest/run.conf")).unwrap();
        assert_eq!(cfg.store, Path::new("/etc/unrest/corpus"));
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.keyword_seeds, ["protest", "bandh"]);
        assert_eq!(cfg.weighting, Weighting::Tfidf);
        assert_eq!(cfg.patterns, None);
        let again = PipelineConfig::parse(&cfg.to_kv(), Path::new("x")).unwrap();
        assert_eq!(again, cfg);

        let e = PipelineConfig::parse("seed = 1\nwidth = 3\n", Path::new("c")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(PipelineConfig::parse("seed 1", Path::new("c")).is_err());
        assert!(PipelineConfig::default().apply_override("seed").is_err());
    }
}
