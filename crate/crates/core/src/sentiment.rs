//! Windowed positive/negative utterance counts for cross-case comparison.

use serde::Serialize;

use crate::corpus::Transcript;
use crate::error::{Error, Result};
use crate::lexicon::PolarityLexicon;
use crate::textprep::{normalize, FilterConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

/// Majority of positive vs. negative hits; ties (including no hits) are neutral.
pub fn utterance_polarity<S: AsRef<str>>(tokens: &[S], lex: &PolarityLexicon) -> Polarity {
    let (mut pos, mut neg) = (0usize, 0usize);
    for t in tokens {
        let t = t.as_ref();
        if lex.positive.contains(t) {
            pos += 1;
        } else if lex.negative.contains(t) {
            neg += 1;
        }
    }
    match pos.cmp(&neg) {
        std::cmp::Ordering::Greater => Polarity::Positive,
        std::cmp::Ordering::Less => Polarity::Negative,
        std::cmp::Ordering::Equal => Polarity::Neutral,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Bin {
    pub positive: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentimentSeries {
    pub transcript_id: String,
    pub bin_size: usize,
    pub n_lines: usize,
    pub bins: Vec<Bin>,
    pub positive_total: usize,
    pub negative_total: usize,
}

impl SentimentSeries {
    /// Build from per-line polarities in line order.
    pub fn from_polarities(transcript_id: &str, polarities: &[Polarity], bin_size: usize) -> Result<Self> {
        if bin_size == 0 {
            return Err(Error::invalid("bin_size", "must be at least 1"));
        }
        let bins: Vec<Bin> = polarities
            .chunks(bin_size)
            .map(|chunk| Bin {
                positive: chunk.iter().filter(|p| **p == Polarity::Positive).count(),
                negative: chunk.iter().filter(|p| **p == Polarity::Negative).count(),
            })
            .collect();
        Ok(Self {
            transcript_id: transcript_id.to_string(),
            bin_size,
            n_lines: polarities.len(),
            positive_total: bins.iter().map(|b| b.positive).sum(),
            negative_total: bins.iter().map(|b| b.negative).sum(),
            bins,
        })
    }

    pub fn net(&self) -> i64 {
        self.positive_total as i64 - self.negative_total as i64
    }
}

pub fn transcript_polarities(transcript: &Transcript, lex: &PolarityLexicon, filter: &FilterConfig) -> Vec<Polarity> {
    transcript
        .utterances
        .iter()
        .map(|u| utterance_polarity(&normalize(&u.text, filter), lex))
        .collect()
}

/// Bin a transcript's utterances by line position.
pub fn sentiment_series(
    transcript: &Transcript,
    lex: &PolarityLexicon,
    filter: &FilterConfig,
    bin_size: usize,
) -> Result<SentimentSeries> {
    SentimentSeries::from_polarities(
        &transcript.id,
        &transcript_polarities(transcript, lex, filter),
        bin_size,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Dominance {
    Positive,
    Negative,
    Balanced,
}

impl Dominance {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominance::Positive => "POSITIVE",
            Dominance::Negative => "NEGATIVE",
            Dominance::Balanced => "BALANCED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRow {
    pub case: usize,
    pub transcript_id: String,
    pub positive_total: usize,
    pub negative_total: usize,
    pub net: i64,
    pub dominant: Dominance,
    /// Net count per bin, for small-multiple charts.
    pub sparkline: Vec<i64>,
}

/// One row per series; `|net| <= tie_margin` is balanced.
pub fn cross_case_table(series: &[SentimentSeries], tie_margin: u64) -> Result<Vec<CaseRow>> {
    if series.is_empty() {
        return Err(Error::invalid("series", "at least one transcript is required"));
    }
    Ok(series
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let net = s.net();
            let dominant = if net.unsigned_abs() <= tie_margin {
                Dominance::Balanced
            } else if net > 0 {
                Dominance::Positive
            } else {
                Dominance::Negative
            };
            CaseRow {
                case: i + 1,
                transcript_id: s.transcript_id.clone(),
                positive_total: s.positive_total,
                negative_total: s.negative_total,
                net,
                dominant,
                sparkline: s.bins.iter().map(|b| b.positive as i64 - b.negative as i64).collect(),
            }
        })
        .collect())
}
