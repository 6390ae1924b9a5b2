//! Tokenization and rule-based token filtering.
//!
//! Closed-class words (pronouns, prepositions, conjunctions, modals,
//! particles) are removed with a word list instead of a part-of-speech
//! tagger. No stemming is applied; lexicons are keyed on surface forms.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_CLOSED_CLASS: &str = include_str!("../data/closed_class.txt");
pub const DEFAULT_EXTRA_STOP: &str = include_str!("../data/extra_stop.txt");
pub const DEFAULT_KEEP: &str = include_str!("../data/keep.txt");
pub const DEFAULT_GENERIC_BLOCKLIST: &str = include_str!("../data/generic_blocklist.txt");

/// Split on whitespace, lowercase, and strip punctuation from token edges.
///
/// Interior apostrophes survive, so "don't" stays one token. Typographic
/// apostrophes are folded to `'`.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let folded: String = raw
                .chars()
                .map(|c| if c == '\u{2019}' || c == '\u{2018}' { '\'' } else { c })
                .collect::<String>()
                .to_lowercase();
            let token = folded.trim_matches(|c: char| !c.is_alphanumeric());
            (!token.is_empty()).then(|| token.to_string())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub closed_class_words: BTreeSet<String>,
    pub extra_stop_words: BTreeSet<String>,
    pub keep_words: BTreeSet<String>,
    pub drop_digit_tokens: bool,
    /// Only consulted by top-word reports, never by filtering.
    pub generic_word_blocklist: BTreeSet<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            closed_class_words: BTreeSet::new(),
            extra_stop_words: BTreeSet::new(),
            keep_words: BTreeSet::new(),
            drop_digit_tokens: true,
            generic_word_blocklist: BTreeSet::new(),
        }
    }
}

/// Optional overrides for the four word-list files.
#[derive(Debug, Clone, Default)]
pub struct FilterPaths<'a> {
    pub closed_class: Option<&'a Path>,
    pub extra_stop: Option<&'a Path>,
    pub keep: Option<&'a Path>,
    pub generic_blocklist: Option<&'a Path>,
}

impl FilterConfig {
    /// The shipped lists.
    pub fn builtin() -> Self {
        Self::load(&FilterPaths::default()).expect("builtin word lists parse")
    }

    /// Load each list from its path, falling back to the shipped list.
    pub fn load(paths: &FilterPaths<'_>) -> Result<Self> {
        let list = |path: Option<&Path>, builtin: &str, name: &str| -> Result<BTreeSet<String>> {
            match path {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                    parse_word_list(&text, &p.display().to_string())
                }
                None => parse_word_list(builtin, &format!("<builtin {name}>")),
            }
        };
        Ok(Self {
            closed_class_words: list(paths.closed_class, DEFAULT_CLOSED_CLASS, "closed_class.txt")?,
            extra_stop_words: list(paths.extra_stop, DEFAULT_EXTRA_STOP, "extra_stop.txt")?,
            keep_words: list(paths.keep, DEFAULT_KEEP, "keep.txt")?,
            drop_digit_tokens: true,
            generic_word_blocklist: list(
                paths.generic_blocklist,
                DEFAULT_GENERIC_BLOCKLIST,
                "generic_blocklist.txt",
            )?,
        })
    }

    /// The configuration used before lexicon lookups: the added stop words
    /// are a topic-modeling device and do not apply here.
    pub fn for_lexicon(&self) -> Self {
        Self {
            extra_stop_words: BTreeSet::new(),
            ..self.clone()
        }
    }

    fn removes(&self, token: &str) -> bool {
        if self.keep_words.contains(token) {
            return false;
        }
        (self.drop_digit_tokens && is_all_digits(token))
            || self.closed_class_words.contains(token)
            || self.extra_stop_words.contains(token)
    }
}

fn is_all_digits(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_ascii_digit())
}

/// Parse a one-word-per-line list. `#` starts a comment line.
pub fn parse_word_list(text: &str, source_name: &str) -> Result<BTreeSet<String>> {
    let mut words = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let word = line.trim();
        if word.is_empty() || word.starts_with('#') {
            continue;
        }
        if word.chars().any(char::is_whitespace) {
            return Err(Error::parse(source_name, i + 1, "word", "entries must be single words"));
        }
        if word.chars().any(char::is_uppercase) {
            return Err(Error::parse(source_name, i + 1, "word", "entries must be lowercase"));
        }
        words.insert(word.to_string());
    }
    Ok(words)
}

pub fn filter_tokens<S: AsRef<str>>(tokens: &[S], config: &FilterConfig) -> Vec<String> {
    tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !config.removes(t))
        .map(str::to_string)
        .collect()
}

/// `tokenize` followed by `filter_tokens`.
pub fn normalize(text: &str, config: &FilterConfig) -> Vec<String> {
    filter_tokens(&tokenize(text), config)
}
