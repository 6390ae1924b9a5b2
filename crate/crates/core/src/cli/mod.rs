//! The `emotopic` command line: argument parsing, input loading and report
//! emission for the `emotions`, `sentiment`, `topics` and `validate`
//! subcommands.

pub mod config;
pub mod manifest;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use crate::corpus::{load_corpus, LabelMap, Transcript};
use crate::error::{Error, Result};
use crate::lexicon::{EmotionLexicon, PolarityLexicon};
use crate::report::{self, ReportFile};
use crate::textprep::{FilterConfig, FilterPaths};
use crate::topics::Init;
use config::{parse_cohort, RunConfig};
use manifest::{looks_like_manifest, Manifest};

#[derive(Debug, Parser)]
#[command(
    name = "emotopic",
    version,
    about = "Emotion, sentiment and topic reports for transcript corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML config file, or a run manifest to replay.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory for reports and the run manifest.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Report formats, comma separated: csv,json,svg.
    #[arg(long, global = true, value_delimiter = ',', value_name = "LIST")]
    pub format: Option<Vec<String>>,

    /// Load and check everything, compute the reports, write nothing.
    #[arg(long, global = true)]
    pub dry_run: bool,

    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub inputs: InputArgs,
}

#[derive(Debug, Default, Args)]
pub struct InputArgs {
    /// Transcript corpus (.jsonl or .csv).
    #[arg(long, global = true, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Corpus format when the extension is ambiguous: jsonl or csv.
    #[arg(long, global = true, value_name = "FMT")]
    pub corpus_format: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub label_map: Option<PathBuf>,
    /// Word-emotion association lexicon (word, emotion, score).
    #[arg(long, global = true, value_name = "PATH")]
    pub emotion_lexicon: Option<PathBuf>,
    /// Associations to remove from the emotion lexicon (word, emotion).
    #[arg(long, global = true, value_name = "PATH")]
    pub adaptations: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub positive_words: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub negative_words: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub closed_class_words: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub extra_stop_words: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub keep_words: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub generic_blocklist: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emotion distribution, intensity by time point and top words.
    Emotions(EmotionArgs),
    /// Binned positive/negative series and the cross-case table.
    Sentiment(SentimentArgs),
    /// TF-IDF + NMF topic models over 25-utterance chunks.
    Topics(TopicArgs),
    /// Check config and inputs without running an analysis.
    Validate,
}

#[derive(Debug, Default, Args)]
pub struct EmotionArgs {
    #[arg(long, value_name = "N")]
    pub top_words: Option<usize>,
    /// trigger (the deciding word) or all-hits.
    #[arg(long, value_name = "MODE")]
    pub word_count_mode: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct SentimentArgs {
    /// Lines per bin.
    #[arg(long, value_name = "N")]
    pub bin_size: Option<usize>,
    /// Largest |net| still reported as balanced.
    #[arg(long, value_name = "N")]
    pub tie_margin: Option<u64>,
    /// idd, peer or all.
    #[arg(long, value_name = "COHORT")]
    pub cohort: Option<String>,
    /// Transcripts drawn for the report; 0 keeps all.
    #[arg(long, value_name = "N")]
    pub cases: Option<usize>,
}

#[derive(Debug, Default, Args)]
pub struct TopicArgs {
    /// idd, peer or all.
    #[arg(long, value_name = "COHORT")]
    pub cohort: Option<String>,
    #[arg(long, short = 'k', value_name = "K")]
    pub k: Option<usize>,
    /// Fit every k in an inclusive range, e.g. 3..6.
    #[arg(long, value_name = "A..B")]
    pub k_sweep: Option<String>,
    #[arg(long, value_name = "X")]
    pub alpha: Option<f64>,
    #[arg(long, value_name = "R")]
    pub l1_ratio: Option<f64>,
    #[arg(long, value_name = "N")]
    pub max_iter: Option<usize>,
    #[arg(long, value_name = "X")]
    pub tol: Option<f64>,
    /// nndsvd or random-seeded.
    #[arg(long, value_name = "METHOD")]
    pub init: Option<String>,
    #[arg(long, value_name = "N")]
    pub chunk_size: Option<usize>,
    #[arg(long, value_name = "N")]
    pub min_df: Option<usize>,
    #[arg(long, value_name = "R")]
    pub max_df_ratio: Option<f64>,
    #[arg(long, value_name = "N")]
    pub top_terms: Option<usize>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Emotions(_) => "emotions",
            Command::Sentiment(_) => "sentiment",
            Command::Topics(_) => "topics",
            Command::Validate => "validate",
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

/// Base config from `--config` (plain file or manifest), or defaults.
fn base_config(cli: &Cli) -> Result<RunConfig> {
    let Some(path) = &cli.config else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if !looks_like_manifest(&text) {
        return RunConfig::from_file(path);
    }
    let manifest = Manifest::parse(&text, path)?;
    manifest.verify()?;
    if manifest.command != cli.command.name() {
        warn!(
            "replaying a `{}` manifest with the `{}` subcommand",
            manifest.command,
            cli.command.name()
        );
    }
    if manifest.tool_version != manifest::TOOL_VERSION {
        warn!(
            "manifest written by version {}, running {}",
            manifest.tool_version,
            manifest::TOOL_VERSION
        );
    }
    Ok(manifest.config)
}

/// Merge flags over the config file; flags win.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = base_config(cli)?;
    let i = &cli.inputs;
    set_opt(&mut cfg.corpus, i.corpus.clone());
    set_opt(&mut cfg.corpus_format, i.corpus_format.clone());
    set_opt(&mut cfg.label_map, i.label_map.clone());
    set_opt(&mut cfg.emotion_lexicon, i.emotion_lexicon.clone());
    set_opt(&mut cfg.adaptations, i.adaptations.clone());
    set_opt(&mut cfg.positive_words, i.positive_words.clone());
    set_opt(&mut cfg.negative_words, i.negative_words.clone());
    set_opt(&mut cfg.closed_class_words, i.closed_class_words.clone());
    set_opt(&mut cfg.extra_stop_words, i.extra_stop_words.clone());
    set_opt(&mut cfg.keep_words, i.keep_words.clone());
    set_opt(&mut cfg.generic_blocklist, i.generic_blocklist.clone());
    set(&mut cfg.out, cli.out.clone());
    set(&mut cfg.formats, cli.format.clone());
    set(&mut cfg.seed, cli.seed);
    match &cli.command {
        Command::Emotions(a) => {
            set(&mut cfg.emotions.top_words, a.top_words);
            set(&mut cfg.emotions.word_count_mode, a.word_count_mode.clone());
        }
        Command::Sentiment(a) => {
            set(&mut cfg.sentiment.bin_size, a.bin_size);
            set(&mut cfg.sentiment.tie_margin, a.tie_margin);
            set(&mut cfg.sentiment.cohort, a.cohort.clone());
            set(&mut cfg.sentiment.cases, a.cases);
        }
        Command::Topics(a) => {
            let t = &mut cfg.topics;
            set(&mut t.cohort, a.cohort.clone());
            if a.k.is_some() {
                // An explicit k on the command line beats a sweep from the file.
                t.k = a.k;
                t.k_sweep = None;
            }
            set_opt(&mut t.k_sweep, a.k_sweep.clone());
            set(&mut t.alpha, a.alpha);
            set(&mut t.l1_ratio, a.l1_ratio);
            set(&mut t.max_iter, a.max_iter);
            set(&mut t.tol, a.tol);
            if let Some(init) = &a.init {
                t.init = init.parse::<Init>().map_err(|m| Error::invalid("init", m))?;
            }
            set(&mut t.chunk_size, a.chunk_size);
            set(&mut t.min_df, a.min_df);
            set(&mut t.max_df_ratio, a.max_df_ratio);
            set(&mut t.top_terms, a.top_terms);
        }
        Command::Validate => {}
    }
    cfg.absolutize()?;
    Ok(cfg)
}

fn require<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("`{key}` is required for this command")))
}

fn load_transcripts(cfg: &RunConfig) -> Result<Vec<Transcript>> {
    let path = require(&cfg.corpus, "corpus")?;
    let transcripts = load_corpus(path, cfg.corpus_format(path)?)?;
    info!("loaded {} transcripts from {}", transcripts.len(), path.display());
    Ok(transcripts)
}

fn load_filter(cfg: &RunConfig) -> Result<FilterConfig> {
    FilterConfig::load(&FilterPaths {
        closed_class: cfg.closed_class_words.as_deref(),
        extra_stop: cfg.extra_stop_words.as_deref(),
        keep: cfg.keep_words.as_deref(),
        generic_blocklist: cfg.generic_blocklist.as_deref(),
    })
}

fn load_label_map(cfg: &RunConfig) -> Result<LabelMap> {
    match &cfg.label_map {
        Some(p) => LabelMap::load(p),
        None => Ok(LabelMap::builtin()),
    }
}

fn load_emotion_lexicon(cfg: &RunConfig) -> Result<EmotionLexicon> {
    let lex = EmotionLexicon::load(require(&cfg.emotion_lexicon, "emotion_lexicon")?)?;
    let Some(path) = &cfg.adaptations else {
        return Ok(lex);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (lex, warnings) = lex.apply_adaptations(&text, &path.display().to_string())?;
    for w in warnings {
        warn!("{w}");
    }
    Ok(lex)
}

fn load_polarity(cfg: &RunConfig) -> Result<PolarityLexicon> {
    let (lex, warnings) = PolarityLexicon::load(
        require(&cfg.positive_words, "positive_words")?,
        require(&cfg.negative_words, "negative_words")?,
    )?;
    for w in warnings {
        warn!("{w}");
    }
    Ok(lex)
}

fn run_emotions(cfg: &RunConfig) -> Result<Vec<ReportFile>> {
    let transcripts = load_transcripts(cfg)?;
    let label_map = load_label_map(cfg)?;
    let lexicon = load_emotion_lexicon(cfg)?;
    let filter = load_filter(cfg)?;
    let built = report::emotions::build_emotion_report(&report::emotions::EmotionInputs {
        transcripts: &transcripts,
        label_map: &label_map,
        lexicon: &lexicon,
        filter: &filter,
        top_k: cfg.emotions.top_words,
        mode: cfg.word_count_mode()?,
    })?;
    let d = &built.diagnostics;
    if !d.unmapped_labels.is_empty() {
        let total: usize = d.unmapped_labels.values().sum();
        warn!(
            "{total} label occurrences ({} distinct) have no emotion mapping and were ignored",
            d.unmapped_labels.len()
        );
    }
    if d.unclassified > 0 {
        warn!(
            "{} of {} emotion utterances had no lexicon hit",
            d.unclassified, d.emotion_utterances
        );
    }
    report::emotions::render(&built, &cfg.formats()?)
}

fn run_sentiment(cfg: &RunConfig) -> Result<Vec<ReportFile>> {
    let transcripts = load_transcripts(cfg)?;
    let lexicon = load_polarity(cfg)?;
    let filter = load_filter(cfg)?;
    let s = &cfg.sentiment;
    let built = report::sentiment::build_sentiment_report(&report::sentiment::SentimentInputs {
        transcripts: &transcripts,
        lexicon: &lexicon,
        filter: &filter,
        bin_size: s.bin_size,
        tie_margin: s.tie_margin,
        cohort: parse_cohort(&s.cohort)?,
        cases: (s.cases > 0).then_some(s.cases),
        seed: cfg.seed,
    })?;
    if built.series.len() < s.cases {
        warn!(
            "only {} transcripts available, fewer than the {} cases requested",
            built.series.len(),
            s.cases
        );
    }
    report::sentiment::render(&built, &cfg.formats()?)
}

fn run_topics(cfg: &RunConfig) -> Result<Vec<ReportFile>> {
    let transcripts = load_transcripts(cfg)?;
    let filter = load_filter(cfg)?;
    let built = report::topics::build_topic_report(&report::topics::TopicInputs {
        transcripts: &transcripts,
        filter: &filter,
        cohort: parse_cohort(&cfg.topics.cohort)?,
        chunk_size: cfg.topics.chunk_size,
        tfidf: cfg.tfidf_options(),
        params: cfg.nmf_params(),
        ks: cfg.topic_counts()?,
        top_n: cfg.topics.top_terms,
    })?;
    for run in &built.runs {
        if !run.model.converged {
            warn!(
                "k = {} stopped at max_iter = {} before reaching tol",
                run.model.k(),
                run.model.params.max_iter
            );
        }
    }
    report::topics::render(&built, &cfg.formats()?)
}

/// Load every configured input and describe it.
fn run_validate(cfg: &RunConfig) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    if cfg.corpus.is_some() {
        let transcripts = load_transcripts(cfg)?;
        let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &transcripts {
            *kinds.entry(t.dyad_kind.as_str()).or_default() += 1;
        }
        let utterances: usize = transcripts.iter().map(|t| t.utterances.len()).sum();
        let kinds: Vec<String> = kinds.iter().map(|(k, n)| format!("{k}={n}")).collect();
        lines.push(format!(
            "corpus: {} transcripts, {utterances} utterances ({})",
            transcripts.len(),
            kinds.join(", ")
        ));
    }
    let label_map = load_label_map(cfg)?;
    lines.push(format!("label map: {} entries", label_map.len()));
    if cfg.emotion_lexicon.is_some() {
        let lex = load_emotion_lexicon(cfg)?;
        lines.push(format!(
            "emotion lexicon: {} words, {} associations",
            lex.word_count(),
            lex.pair_count()
        ));
    }
    if cfg.positive_words.is_some() || cfg.negative_words.is_some() {
        let lex = load_polarity(cfg)?;
        lines.push(format!(
            "polarity lexicon: {} positive, {} negative",
            lex.positive.len(),
            lex.negative.len()
        ));
    }
    let filter = load_filter(cfg)?;
    lines.push(format!(
        "filters: {} closed-class, {} extra stop, {} kept",
        filter.closed_class_words.len(),
        filter.extra_stop_words.len(),
        filter.keep_words.len()
    ));
    Ok(lines)
}

/// Run a parsed command line, writing reports and the manifest unless
/// `--dry-run` is set.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = resolve_config(cli)?;
    cfg.validate()?;
    let command = cli.command.name();
    let files = match &cli.command {
        Command::Emotions(_) => run_emotions(&cfg)?,
        Command::Sentiment(_) => run_sentiment(&cfg)?,
        Command::Topics(_) => run_topics(&cfg)?,
        Command::Validate => {
            for line in run_validate(&cfg)? {
                println!("{line}");
            }
            println!("ok");
            return Ok(());
        }
    };
    let manifest = Manifest::capture(command, &cfg)?;
    let manifest_file = ReportFile::new(Manifest::file_name(command), manifest.to_toml()?);
    if cli.dry_run {
        for f in files.iter().chain(std::iter::once(&manifest_file)) {
            println!("would write {}", cfg.out.join(&f.name).display());
        }
        return Ok(());
    }
    for f in files.iter().chain(std::iter::once(&manifest_file)) {
        f.write_into(&cfg.out)?;
        println!("{}", cfg.out.join(&f.name).display());
    }
    Ok(())
}
