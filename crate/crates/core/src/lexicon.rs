//! Word–emotion association lexicons and positive/negative polarity lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::taxonomy::Emotion;

/// A removal applied to a loaded lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adaptation {
    pub word: String,
    pub emotion: Emotion,
    /// False when the pair was not present (no-op).
    pub applied: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub adaptations: Vec<Adaptation>,
}

/// Word → {emotion → association score in [0, 1]}.
///
/// Scores double as intensity values. Rows with a score of exactly zero
/// denote "no association" in the binary distribution of these lexicons
/// and are not stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmotionLexicon {
    entries: BTreeMap<String, BTreeMap<Emotion, f64>>,
    pub provenance: Provenance,
}

/// Rows of the published emotion files that carry polarity, not emotion.
const POLARITY_COLUMNS: [&str; 2] = ["positive", "negative"];

impl EmotionLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse `word<TAB>emotion<TAB>score` rows.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, BTreeMap<Emotion, f64>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "<row>",
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let (word, emotion, score) = (cols[0].trim(), cols[1].trim(), cols[2].trim());
            // header row of the intensity-scored distribution
            if line_no == 1 && word == "word" && score.parse::<f64>().is_err() {
                continue;
            }
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "word",
                    "multi-word or empty entries are not supported",
                ));
            }
            if POLARITY_COLUMNS.contains(&emotion) {
                continue;
            }
            let emotion: Emotion = emotion.parse().map_err(|e: crate::taxonomy::UnknownEmotion| {
                Error::parse(source_name, line_no, "emotion", e.to_string())
            })?;
            let score: f64 = score
                .parse()
                .map_err(|_| Error::parse(source_name, line_no, "score", format!("`{score}` is not a number")))?;
            if !(0.0..=1.0).contains(&score) {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "score",
                    format!("{score} is outside [0, 1]"),
                ));
            }
            let word = word.to_lowercase();
            let slot = entries.entry(word.clone()).or_default();
            if slot.contains_key(&emotion) {
                return Err(Error::DuplicateEntry {
                    source_name: source_name.to_string(),
                    line: line_no,
                    word,
                    emotion: emotion.to_string(),
                });
            }
            if score > 0.0 {
                slot.insert(emotion, score);
            }
        }
        entries.retain(|_, m| !m.is_empty());
        Ok(Self {
            entries,
            provenance: Provenance {
                source: source_name.to_string(),
                adaptations: Vec::new(),
            },
        })
    }

    pub fn lookup(&self, word: &str) -> Option<&BTreeMap<Emotion, f64>> {
        self.entries.get(word)
    }

    pub fn score(&self, word: &str, emotion: Emotion) -> Option<f64> {
        self.entries.get(word)?.get(&emotion).copied()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn word_count(&self) -> usize {
        self.entries.len()
    }

    pub fn pair_count(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn insert(&mut self, word: &str, emotion: Emotion, score: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::invalid("score", format!("{score} is outside [0, 1]")));
        }
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::invalid("word", "multi-word or empty entries are not supported"));
        }
        self.entries
            .entry(word.to_lowercase())
            .or_default()
            .insert(emotion, score);
        Ok(())
    }

    /// Drop the (word, emotion) association. Removing an absent pair is a
    /// no-op reported through the returned flag (false).
    pub fn remove_association(mut self, word: &str, emotion: Emotion) -> (Self, bool) {
        let word = word.to_lowercase();
        let mut removed = false;
        if let Some(slot) = self.entries.get_mut(&word) {
            removed = slot.remove(&emotion).is_some();
            if slot.is_empty() {
                self.entries.remove(&word);
            }
        }
        self.provenance.adaptations.push(Adaptation {
            word,
            emotion,
            applied: removed,
        });
        (self, removed)
    }

    /// Apply every removal row of an adaptation file. Returns one warning per
    /// row that matched nothing.
    pub fn apply_adaptations(self, text: &str, source_name: &str) -> Result<(Self, Vec<String>)> {
        let mut lex = self;
        let mut warnings = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 2 {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "<row>",
                    "expected `word<TAB>emotion`",
                ));
            }
            let emotion: Emotion = cols[1].trim().parse().map_err(|e: crate::taxonomy::UnknownEmotion| {
                Error::parse(source_name, line_no, "emotion", e.to_string())
            })?;
            let word = cols[0].trim();
            let (next, removed) = lex.remove_association(word, emotion);
            lex = next;
            if !removed {
                warnings.push(format!(
                    "{source_name}:{line_no}: ({word}, {emotion}) not in lexicon; nothing removed"
                ));
            }
        }
        Ok((lex, warnings))
    }

    /// TSV form accepted by [`EmotionLexicon::parse`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (word, emotions) in &self.entries {
            for (emotion, score) in emotions {
                let _ = writeln!(out, "{word}\t{emotion}\t{score}");
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolarityLexicon {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
}

impl PolarityLexicon {
    pub fn load(positive: &Path, negative: &Path) -> Result<(Self, Vec<String>)> {
        let pos = std::fs::read_to_string(positive).map_err(|e| Error::io(positive, e))?;
        let neg = std::fs::read_to_string(negative).map_err(|e| Error::io(negative, e))?;
        Self::parse(
            &pos,
            &positive.display().to_string(),
            &neg,
            &negative.display().to_string(),
        )
    }

    /// Parse the two plain word lists. `;` comment lines are ignored.
    /// Returns warnings for empty lists.
    pub fn parse(
        positive: &str,
        positive_name: &str,
        negative: &str,
        negative_name: &str,
    ) -> Result<(Self, Vec<String>)> {
        let read = |text: &str| -> BTreeSet<String> {
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with(';'))
                .map(str::to_lowercase)
                .collect()
        };
        let lex = Self {
            positive: read(positive),
            negative: read(negative),
        };
        let overlap: Vec<String> = lex.positive.intersection(&lex.negative).cloned().collect();
        if !overlap.is_empty() {
            return Err(Error::PolarityOverlap(overlap));
        }
        let mut warnings = Vec::new();
        for (set, name) in [(&lex.positive, positive_name), (&lex.negative, negative_name)] {
            if set.is_empty() {
                warnings.push(format!("{name}: polarity list is empty"));
            }
        }
        Ok((lex, warnings))
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }
}
