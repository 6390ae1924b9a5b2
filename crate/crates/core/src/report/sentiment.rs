//! Per-transcript sentiment series and the cross-case panel chart.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::svg::{sentiment_small_multiples, SentimentPanel};
use super::{csv_string, json_string, Format, FormatSet, ReportFile};
use crate::corpus::{Cohort, Transcript};
use crate::error::{Error, Result};
use crate::lexicon::PolarityLexicon;
use crate::sentiment::{cross_case_table, sentiment_series, CaseRow, SentimentSeries};
use crate::textprep::FilterConfig;

pub const DEFAULT_CASES: usize = 24;
pub const PANEL_COLUMNS: usize = 6;

pub struct SentimentInputs<'a> {
    pub transcripts: &'a [Transcript],
    pub lexicon: &'a PolarityLexicon,
    pub filter: &'a FilterConfig,
    pub bin_size: usize,
    pub tie_margin: u64,
    /// `None` draws from every cohort.
    pub cohort: Option<Cohort>,
    /// Number of cases to draw; `None` keeps every eligible transcript.
    pub cases: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentReport {
    pub bin_size: usize,
    pub tie_margin: u64,
    pub cohort: Option<Cohort>,
    pub seed: u64,
    pub eligible: usize,
    pub series: Vec<SentimentSeries>,
    pub cases: Vec<CaseRow>,
}

/// Seeded draw of `n` transcripts, returned in corpus order.
pub fn select_cases<'a>(eligible: &[&'a Transcript], n: Option<usize>, seed: u64) -> Vec<&'a Transcript> {
    let Some(n) = n.filter(|&n| n < eligible.len()) else {
        return eligible.to_vec();
    };
    let mut order: Vec<usize> = (0..eligible.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut picked = order[..n].to_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| eligible[i]).collect()
}

pub fn build_sentiment_report(inputs: &SentimentInputs<'_>) -> Result<SentimentReport> {
    if inputs.cases == Some(0) {
        return Err(Error::invalid("cases", "must be at least 1"));
    }
    let eligible: Vec<&Transcript> = inputs
        .transcripts
        .iter()
        .filter(|t| inputs.cohort.is_none_or(|c| t.cohort == c))
        .collect();
    if eligible.is_empty() {
        return Err(Error::invalid("cohort", "no transcripts in the selected cohort"));
    }
    let filter = inputs.filter.for_lexicon();
    let series = select_cases(&eligible, inputs.cases, inputs.seed)
        .into_iter()
        .map(|t| sentiment_series(t, inputs.lexicon, &filter, inputs.bin_size))
        .collect::<Result<Vec<_>>>()?;
    let cases = cross_case_table(&series, inputs.tie_margin)?;
    Ok(SentimentReport {
        bin_size: inputs.bin_size,
        tie_margin: inputs.tie_margin,
        cohort: inputs.cohort,
        seed: inputs.seed,
        eligible: eligible.len(),
        series,
        cases,
    })
}

pub fn series_csv(report: &SentimentReport) -> Result<String> {
    csv_string(
        &["transcript_id", "bin_index", "positive", "negative"],
        report.series.iter().flat_map(|s| {
            s.bins.iter().enumerate().map(|(i, b)| {
                vec![
                    s.transcript_id.clone(),
                    i.to_string(),
                    b.positive.to_string(),
                    b.negative.to_string(),
                ]
            })
        }),
    )
}

/// Sparkline cells are `;`-joined per-bin net counts.
pub fn cross_case_csv(report: &SentimentReport) -> Result<String> {
    csv_string(
        &[
            "case",
            "transcript_id",
            "positive_total",
            "negative_total",
            "net",
            "dominant",
            "sparkline",
        ],
        report.cases.iter().map(|r| {
            vec![
                r.case.to_string(),
                r.transcript_id.clone(),
                r.positive_total.to_string(),
                r.negative_total.to_string(),
                r.net.to_string(),
                r.dominant.as_str().to_string(),
                r.sparkline.iter().map(i64::to_string).collect::<Vec<_>>().join(";"),
            ]
        }),
    )
}

pub fn panels_svg(report: &SentimentReport) -> String {
    let panels: Vec<SentimentPanel> = report
        .series
        .iter()
        .zip(&report.cases)
        .map(|(s, c)| SentimentPanel {
            label: format!("Case #{}", c.case),
            bins: s.bins.iter().map(|b| (b.positive, b.negative)).collect(),
        })
        .collect();
    sentiment_small_multiples(
        "Positive and negative utterances per transcript",
        &format!("lines of utterances ({} per bar)", report.bin_size),
        &panels,
        PANEL_COLUMNS,
    )
}

pub fn render(report: &SentimentReport, formats: &FormatSet) -> Result<Vec<ReportFile>> {
    let mut files = Vec::new();
    if formats.contains(&Format::Csv) {
        files.push(ReportFile::new("sentiment_series.csv", series_csv(report)?));
        files.push(ReportFile::new("sentiment_cross_case.csv", cross_case_csv(report)?));
    }
    if formats.contains(&Format::Json) {
        files.push(ReportFile::new("sentiment.json", json_string(report)?));
    }
    if formats.contains(&Format::Svg) {
        files.push(ReportFile::new("sentiment.svg", panels_svg(report)));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_is_seeded_and_ordered() {
        let ts: Vec<Transcript> = (0..10)
            .map(|i| Transcript {
                id: format!("t{i}"),
                cohort: Cohort::IddFamily,
                time_point: crate::corpus::TimePoint::T1,
                dyad_kind: crate::corpus::DyadKind::ParentChild,
                utterances: Vec::new(),
            })
            .collect();
        let refs: Vec<&Transcript> = ts.iter().collect();
        let a: Vec<_> = select_cases(&refs, Some(4), 7).iter().map(|t| t.id.clone()).collect();
        let b: Vec<_> = select_cases(&refs, Some(4), 7).iter().map(|t| t.id.clone()).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        let mut sorted = a.clone();
        sorted.sort_by_key(|id| id[1..].parse::<usize>().unwrap());
        assert_eq!(a, sorted);
        assert_eq!(select_cases(&refs, Some(20), 7).len(), 10);
        assert_eq!(select_cases(&refs, None, 7).len(), 10);
    }
}
