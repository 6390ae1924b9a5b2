//! Emotion distribution, intensity-by-time and top-word reports.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::svg::{grouped_bar_chart, BarSeries};
use super::{csv_string, fmt_opt, json_string, Format, FormatSet, ReportFile};
use crate::corpus::{select_emotion_utterances, Cohort, LabelMap, TimePoint, Transcript};
use crate::emotion::{
    classify_subset, emotion_distribution, label_distribution, mean_intensity, profile, top_emotion_words,
    EmotionProfile, WordCountMode,
};
use crate::error::{Error, Result};
use crate::lexicon::EmotionLexicon;
use crate::taxonomy::{Emotion, LabelClass};
use crate::textprep::FilterConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionRow {
    pub emotion: LabelClass,
    pub idd_original: Option<f64>,
    pub idd_lexicon: Option<f64>,
    pub peer_original: Option<f64>,
    pub peer_lexicon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntensityRow {
    pub emotion: Emotion,
    pub idd_t1: Option<f64>,
    pub idd_t2: Option<f64>,
    pub peer_t1: Option<f64>,
    pub peer_t2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordCount {
    pub word: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortTopWords {
    pub cohort: Cohort,
    pub words: BTreeMap<Emotion, Vec<WordCount>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub labeled_pairs: usize,
    pub emotion_utterances: usize,
    pub classified: usize,
    pub unclassified: usize,
    pub unmapped_labels: BTreeMap<String, usize>,
    /// File name only, so reports do not depend on where inputs live.
    pub lexicon_source: String,
    pub lexicon_pairs: usize,
    pub adaptations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmotionReport {
    pub word_count_mode: WordCountMode,
    pub top_k: usize,
    pub distribution: Vec<DistributionRow>,
    pub intensity: Vec<IntensityRow>,
    pub top_words: Vec<CohortTopWords>,
    /// Pooled and per-time-point profiles for each cohort.
    pub profiles: Vec<EmotionProfile>,
    pub diagnostics: Diagnostics,
}

pub struct EmotionInputs<'a> {
    pub transcripts: &'a [Transcript],
    pub label_map: &'a LabelMap,
    pub lexicon: &'a EmotionLexicon,
    pub filter: &'a FilterConfig,
    pub top_k: usize,
    pub mode: WordCountMode,
}

pub fn build_emotion_report(inputs: &EmotionInputs<'_>) -> Result<EmotionReport> {
    if inputs.top_k == 0 {
        return Err(Error::invalid("top_words", "must be at least 1"));
    }
    let subset = select_emotion_utterances(inputs.transcripts, inputs.label_map);
    if subset.pairs.is_empty() {
        return Err(Error::EmptyEmotionSubset);
    }
    let lexicon_filter = inputs.filter.for_lexicon();
    let classified = classify_subset(&subset, inputs.lexicon, &lexicon_filter);

    let original = |cohort: Cohort| -> Option<BTreeMap<LabelClass, f64>> {
        let classes: Vec<LabelClass> = subset
            .pairs
            .iter()
            .filter(|p| p.transcript.cohort == cohort)
            .map(|p| p.class)
            .collect();
        label_distribution(&classes).ok()
    };
    let lexicon = |cohort: Cohort| -> Option<BTreeMap<Emotion, f64>> {
        let members: Vec<_> = classified
            .assignments
            .iter()
            .filter(|a| a.cohort == cohort)
            .cloned()
            .collect();
        emotion_distribution(&members).ok()
    };
    let (idd_orig, peer_orig) = (original(Cohort::IddFamily), original(Cohort::Peer));
    let (idd_lex, peer_lex) = (lexicon(Cohort::IddFamily), lexicon(Cohort::Peer));
    let lex_cell =
        |d: &Option<BTreeMap<Emotion, f64>>, class: LabelClass| class.emotion().and_then(|e| d.as_ref().map(|m| m[&e]));
    let distribution = LabelClass::all()
        .map(|class| DistributionRow {
            emotion: class,
            idd_original: idd_orig.as_ref().map(|m| m[&class]),
            idd_lexicon: lex_cell(&idd_lex, class),
            peer_original: peer_orig.as_ref().map(|m| m[&class]),
            peer_lexicon: lex_cell(&peer_lex, class),
        })
        .collect();

    let table = mean_intensity(&classified.assignments);
    let cell = |c: Cohort, t: TimePoint, e: Emotion| table.get(&(c, t)).and_then(|m| m.get(&e)).copied();
    let intensity = Emotion::ALL
        .into_iter()
        .map(|e| IntensityRow {
            emotion: e,
            idd_t1: cell(Cohort::IddFamily, TimePoint::T1, e),
            idd_t2: cell(Cohort::IddFamily, TimePoint::T2, e),
            peer_t1: cell(Cohort::Peer, TimePoint::T1, e),
            peer_t2: cell(Cohort::Peer, TimePoint::T2, e),
        })
        .collect();

    let top_words = Cohort::ALL
        .into_iter()
        .map(|cohort| {
            let members: Vec<_> = classified
                .assignments
                .iter()
                .filter(|a| a.cohort == cohort)
                .cloned()
                .collect();
            let words = Emotion::ALL
                .into_iter()
                .map(|e| {
                    let rows = top_emotion_words(
                        &members,
                        e,
                        inputs.top_k,
                        &inputs.filter.generic_word_blocklist,
                        inputs.mode,
                    )
                    .into_iter()
                    .map(|(word, count)| WordCount { word, count })
                    .collect();
                    (e, rows)
                })
                .collect();
            CohortTopWords { cohort, words }
        })
        .collect();

    let mut profiles = Vec::new();
    for cohort in Cohort::ALL {
        for tp in [None, Some(TimePoint::T1), Some(TimePoint::T2)] {
            profiles.extend(profile(&classified, cohort, tp));
        }
    }

    Ok(EmotionReport {
        word_count_mode: inputs.mode,
        top_k: inputs.top_k,
        distribution,
        intensity,
        top_words,
        profiles,
        diagnostics: Diagnostics {
            labeled_pairs: subset.pairs.len(),
            emotion_utterances: classified.assignments.len() + classified.unclassified.len(),
            classified: classified.assignments.len(),
            unclassified: classified.unclassified.len(),
            unmapped_labels: subset.unmapped.clone(),
            lexicon_source: std::path::Path::new(&inputs.lexicon.provenance.source)
                .file_name()
                .map_or_else(
                    || inputs.lexicon.provenance.source.clone(),
                    |n| n.to_string_lossy().into_owned(),
                ),
            lexicon_pairs: inputs.lexicon.pair_count(),
            adaptations: inputs
                .lexicon
                .provenance
                .adaptations
                .iter()
                .map(|a| format!("-{}:{}{}", a.word, a.emotion, if a.applied { "" } else { " (absent)" }))
                .collect(),
        },
    })
}

pub fn distribution_csv(report: &EmotionReport) -> Result<String> {
    csv_string(
        &[
            "emotion",
            "idd_original",
            "idd_lexicon",
            "peer_original",
            "peer_lexicon",
        ],
        report.distribution.iter().map(|r| {
            vec![
                r.emotion.to_string(),
                fmt_opt(r.idd_original),
                fmt_opt(r.idd_lexicon),
                fmt_opt(r.peer_original),
                fmt_opt(r.peer_lexicon),
            ]
        }),
    )
}

pub fn intensity_csv(report: &EmotionReport) -> Result<String> {
    csv_string(
        &["emotion", "idd_t1", "idd_t2", "peer_t1", "peer_t2"],
        report.intensity.iter().map(|r| {
            vec![
                r.emotion.to_string(),
                fmt_opt(r.idd_t1),
                fmt_opt(r.idd_t2),
                fmt_opt(r.peer_t1),
                fmt_opt(r.peer_t2),
            ]
        }),
    )
}

/// Wide layout: one (word, count) column pair per emotion, one row per rank.
pub fn top_words_csv(words: &CohortTopWords) -> Result<String> {
    let header: Vec<String> = std::iter::once("rank".to_string())
        .chain(
            Emotion::ALL
                .iter()
                .flat_map(|e| [format!("{e}_word"), format!("{e}_count")]),
        )
        .collect();
    let depth = words.words.values().map(Vec::len).max().unwrap_or(0);
    let rows = (0..depth).map(|i| {
        let mut row = vec![(i + 1).to_string()];
        for e in Emotion::ALL {
            match words.words.get(&e).and_then(|w| w.get(i)) {
                Some(wc) => {
                    row.push(wc.word.clone());
                    row.push(wc.count.to_string());
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        row
    });
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_string(&header, rows)
}

pub fn intensity_svg(report: &EmotionReport) -> String {
    let categories: Vec<String> = Emotion::ALL.iter().map(|e| e.to_string()).collect();
    let column = |name: &str, f: fn(&IntensityRow) -> Option<f64>| BarSeries {
        name: name.to_string(),
        values: report.intensity.iter().map(f).collect(),
    };
    grouped_bar_chart(
        "Average emotion intensity across time",
        "mean association score",
        &categories,
        &[
            column("IDD T1", |r| r.idd_t1),
            column("IDD T2", |r| r.idd_t2),
            column("Peers T1", |r| r.peer_t1),
            column("Peers T2", |r| r.peer_t2),
        ],
    )
}

pub fn render(report: &EmotionReport, formats: &FormatSet) -> Result<Vec<ReportFile>> {
    let mut files = Vec::new();
    if formats.contains(&Format::Csv) {
        files.push(ReportFile::new("emotion_distribution.csv", distribution_csv(report)?));
        files.push(ReportFile::new("emotion_intensity.csv", intensity_csv(report)?));
        for words in &report.top_words {
            files.push(ReportFile::new(
                format!("emotion_top_words_{}.csv", words.cohort.tag()),
                top_words_csv(words)?,
            ));
        }
    }
    if formats.contains(&Format::Json) {
        files.push(ReportFile::new("emotions.json", json_string(report)?));
    }
    if formats.contains(&Format::Svg) {
        files.push(ReportFile::new("emotion_intensity.svg", intensity_svg(report)));
    }
    Ok(files)
}

/// Words excluded from every top-word list of a report.
pub fn blocked_words(report: &EmotionReport, blocklist: &BTreeSet<String>) -> usize {
    report
        .top_words
        .iter()
        .flat_map(|c| c.words.values().flatten())
        .filter(|wc| blocklist.contains(&wc.word))
        .count()
}

/// Sum of a distribution column, for normalization checks.
pub fn column_sum(report: &EmotionReport, pick: fn(&DistributionRow) -> Option<f64>) -> f64 {
    report.distribution.iter().filter_map(pick).sum()
}
