//! Run configuration: a TOML file merged with command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{Cohort, CorpusFormat};
use crate::emotion::WordCountMode;
use crate::error::{Error, Result};
use crate::report::{Format, FormatSet};
use crate::topics::{Init, NmfParams, TfidfOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
    /// `jsonl` or `csv`; guessed from the extension when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus_format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label_map: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emotion_lexicon: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adaptations: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_words: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_words: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_class_words: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra_stop_words: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keep_words: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic_blocklist: Option<PathBuf>,
    pub out: PathBuf,
    pub formats: Vec<String>,
    pub seed: u64,
    pub emotions: EmotionSection,
    pub sentiment: SentimentSection,
    pub topics: TopicSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmotionSection {
    pub top_words: usize,
    /// `trigger` or `all-hits`.
    pub word_count_mode: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SentimentSection {
    pub bin_size: usize,
    pub tie_margin: u64,
    /// `idd`, `peer` or `all`.
    pub cohort: String,
    /// Cases drawn for the cross-case report; 0 keeps every transcript.
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicSection {
    pub cohort: String,
    pub chunk_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Inclusive range such as `3..6`; takes precedence over `k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_sweep: Option<String>,
    pub alpha: f64,
    pub l1_ratio: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub init: Init,
    pub min_df: usize,
    pub max_df_ratio: f64,
    pub top_terms: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpus: None,
            corpus_format: None,
            label_map: None,
            emotion_lexicon: None,
            adaptations: None,
            positive_words: None,
            negative_words: None,
            closed_class_words: None,
            extra_stop_words: None,
            keep_words: None,
            generic_blocklist: None,
            out: PathBuf::from("reports"),
            formats: vec!["csv".into(), "json".into(), "svg".into()],
            seed: 0,
            emotions: EmotionSection::default(),
            sentiment: SentimentSection::default(),
            topics: TopicSection::default(),
        }
    }
}

impl Default for EmotionSection {
    fn default() -> Self {
        Self {
            top_words: 10,
            word_count_mode: "trigger".into(),
        }
    }
}

impl Default for SentimentSection {
    fn default() -> Self {
        Self {
            bin_size: 20,
            tie_margin: 0,
            cohort: "idd".into(),
            cases: crate::report::sentiment::DEFAULT_CASES,
        }
    }
}

impl Default for TopicSection {
    fn default() -> Self {
        let nmf = NmfParams::default();
        let tfidf = TfidfOptions::default();
        Self {
            cohort: "idd".into(),
            chunk_size: 25,
            k: None,
            k_sweep: None,
            alpha: nmf.alpha,
            l1_ratio: nmf.l1_ratio,
            max_iter: nmf.max_iter,
            tol: nmf.tol,
            init: nmf.init,
            min_df: tfidf.min_df,
            max_df_ratio: tfidf.max_df_ratio,
            top_terms: crate::report::topics::TOP_TERMS,
        }
    }
}

/// `idd`, `peer` or `all` (`None`).
pub fn parse_cohort(s: &str) -> Result<Option<Cohort>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "all" => Ok(None),
        "idd" | "idd_family" | "idd-family" => Ok(Some(Cohort::IddFamily)),
        "peer" | "peers" => Ok(Some(Cohort::Peer)),
        other => Err(Error::invalid(
            "cohort",
            format!("`{other}` is not one of idd, peer, all"),
        )),
    }
}

/// Inclusive `a..b` (or `a..=b`) range of topic counts.
pub fn parse_k_sweep(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::invalid("k_sweep", format!("`{s}` is not a range like 3..6"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

impl RunConfig {
    /// Read a config file; relative paths inside it resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.rebase(base);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("config encoding: {e}")))
    }

    fn paths_mut(&mut self) -> impl Iterator<Item = &mut PathBuf> {
        [
            &mut self.corpus,
            &mut self.label_map,
            &mut self.emotion_lexicon,
            &mut self.adaptations,
            &mut self.positive_words,
            &mut self.negative_words,
            &mut self.closed_class_words,
            &mut self.extra_stop_words,
            &mut self.keep_words,
            &mut self.generic_blocklist,
        ]
        .into_iter()
        .flatten()
        .chain(std::iter::once(&mut self.out))
    }

    /// Every configured input path with its config key.
    pub fn input_paths(&self) -> Vec<(&'static str, &Path)> {
        [
            ("corpus", &self.corpus),
            ("label_map", &self.label_map),
            ("emotion_lexicon", &self.emotion_lexicon),
            ("adaptations", &self.adaptations),
            ("positive_words", &self.positive_words),
            ("negative_words", &self.negative_words),
            ("closed_class_words", &self.closed_class_words),
            ("extra_stop_words", &self.extra_stop_words),
            ("keep_words", &self.keep_words),
            ("generic_blocklist", &self.generic_blocklist),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.as_deref().map(|p| (k, p)))
        .collect()
    }

    fn rebase(&mut self, base: &Path) {
        for p in self.paths_mut() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    /// Make every path absolute against the working directory.
    pub fn absolutize(&mut self) -> Result<()> {
        for p in self.paths_mut() {
            *p = std::path::absolute(&*p).map_err(|e| Error::io(p.as_path(), e))?;
        }
        Ok(())
    }

    pub fn formats(&self) -> Result<FormatSet> {
        let set = self
            .formats
            .iter()
            .map(|f| f.parse::<Format>().map_err(|m| Error::invalid("format", m)))
            .collect::<Result<FormatSet>>()?;
        if set.is_empty() {
            return Err(Error::invalid("format", "at least one report format is required"));
        }
        Ok(set)
    }

    pub fn corpus_format(&self, corpus: &Path) -> Result<CorpusFormat> {
        match &self.corpus_format {
            Some(f) => f.parse().map_err(|m: String| Error::invalid("corpus_format", m)),
            None => CorpusFormat::from_path(corpus).ok_or_else(|| {
                Error::invalid(
                    "corpus_format",
                    format!("cannot infer the format of {}; set corpus_format", corpus.display()),
                )
            }),
        }
    }

    pub fn word_count_mode(&self) -> Result<WordCountMode> {
        self.emotions
            .word_count_mode
            .parse()
            .map_err(|m: String| Error::invalid("word_count_mode", m))
    }

    pub fn nmf_params(&self) -> NmfParams {
        let t = &self.topics;
        NmfParams {
            k: t.k.unwrap_or(1),
            alpha: t.alpha,
            l1_ratio: t.l1_ratio,
            max_iter: t.max_iter,
            tol: t.tol,
            seed: self.seed,
            init: t.init,
        }
    }

    pub fn tfidf_options(&self) -> TfidfOptions {
        TfidfOptions {
            min_df: self.topics.min_df,
            max_df_ratio: self.topics.max_df_ratio,
        }
    }

    /// Topic counts to fit, from `k_sweep` or else `k`.
    pub fn topic_counts(&self) -> Result<Vec<usize>> {
        match (&self.topics.k_sweep, self.topics.k) {
            (Some(s), _) => parse_k_sweep(s),
            (None, Some(0)) => Err(Error::invalid("k", "must be at least 1")),
            (None, Some(k)) => Ok(vec![k]),
            (None, None) => Err(Error::invalid("k", "set k or k_sweep for topic modeling")),
        }
    }

    /// Range checks that do not touch the filesystem.
    pub fn validate_values(&self) -> Result<()> {
        self.formats()?;
        self.word_count_mode()?;
        parse_cohort(&self.sentiment.cohort)?;
        parse_cohort(&self.topics.cohort)?;
        if let Some(f) = &self.corpus_format {
            f.parse::<CorpusFormat>()
                .map_err(|m| Error::invalid("corpus_format", m))?;
        }
        if self.emotions.top_words == 0 {
            return Err(Error::invalid("top_words", "must be at least 1"));
        }
        if self.sentiment.bin_size == 0 {
            return Err(Error::invalid("bin_size", "must be at least 1"));
        }
        if self.topics.chunk_size == 0 {
            return Err(Error::invalid("chunk_size", "must be at least 1"));
        }
        if self.topics.top_terms == 0 {
            return Err(Error::invalid("top_terms", "must be at least 1"));
        }
        if self.topics.min_df == 0 {
            return Err(Error::invalid("min_df", "must be at least 1"));
        }
        let r = self.topics.max_df_ratio;
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::invalid("max_df_ratio", "must be in (0, 1]"));
        }
        if let Some(s) = &self.topics.k_sweep {
            parse_k_sweep(s)?;
        }
        if self.topics.k == Some(0) {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        self.nmf_params().validate()
    }

    /// Range checks plus existence of every referenced input file.
    pub fn validate(&self) -> Result<()> {
        self.validate_values()?;
        for (key, path) in self.input_paths() {
            if !path.is_file() {
                return Err(Error::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, format!("{key} not found")),
                ));
            }
        }
        Ok(())
    }
}
