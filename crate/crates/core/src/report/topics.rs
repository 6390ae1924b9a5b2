//! Topic-model runs over chunked transcripts and their exports.

use serde::Serialize;

use super::svg::{topic_panels, TopicPanel};
use super::{csv_string, fmt_num, json_string, Format, FormatSet, ReportFile};
use crate::corpus::{chunk_transcripts, Cohort, Transcript};
use crate::error::{Error, Result};
use crate::textprep::{normalize, FilterConfig};
use crate::topics::{
    assign_documents, build_tfidf, nmf_fit, top_terms, ModelExport, NmfModel, NmfParams, TermDocMatrix, TfidfOptions,
    Vocabulary,
};

pub const TOP_TERMS: usize = 10;
pub const PANEL_COLUMNS: usize = 4;

pub struct TopicInputs<'a> {
    pub transcripts: &'a [Transcript],
    pub filter: &'a FilterConfig,
    /// `None` pools both cohorts into one vocabulary.
    pub cohort: Option<Cohort>,
    pub chunk_size: usize,
    pub tfidf: TfidfOptions,
    pub params: NmfParams,
    /// Topic counts to fit; one entry for a plain run, several for a sweep.
    pub ks: Vec<usize>,
    pub top_n: usize,
}

pub struct TopicRun {
    pub model: NmfModel,
    pub export: ModelExport,
}

pub struct TopicReport {
    pub tag: &'static str,
    pub vocabulary: Vocabulary,
    pub matrix: TermDocMatrix,
    pub runs: Vec<TopicRun>,
    pub sweep: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub n_iter: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub relative_residual: f64,
}

fn cohort_tag(cohort: Option<Cohort>) -> &'static str {
    cohort.map_or("all", Cohort::tag)
}

/// Chunk, normalize and vectorize the selected transcripts.
pub fn vectorize(inputs: &TopicInputs<'_>) -> Result<(Vocabulary, TermDocMatrix)> {
    let selected: Vec<Transcript> = inputs
        .transcripts
        .iter()
        .filter(|t| inputs.cohort.is_none_or(|c| t.cohort == c))
        .cloned()
        .collect();
    if selected.is_empty() {
        return Err(Error::invalid("cohort", "no transcripts in the selected cohort"));
    }
    let mut documents = chunk_transcripts(&selected, inputs.chunk_size)?;
    for doc in &mut documents {
        doc.tokens = doc.lines.iter().flat_map(|l| normalize(l, inputs.filter)).collect();
    }
    build_tfidf(&documents, inputs.tfidf)
}

pub fn build_topic_report(inputs: &TopicInputs<'_>) -> Result<TopicReport> {
    if inputs.ks.is_empty() {
        return Err(Error::invalid("k", "at least one topic count is required"));
    }
    if inputs.top_n == 0 {
        return Err(Error::invalid("top_terms", "must be at least 1"));
    }
    let (vocabulary, matrix) = vectorize(inputs)?;
    let runs = inputs
        .ks
        .iter()
        .map(|&k| {
            let model = nmf_fit(&matrix, &NmfParams { k, ..inputs.params })?;
            let export = ModelExport::new(&model, &vocabulary, inputs.top_n)?;
            Ok(TopicRun { model, export })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TopicReport {
        tag: cohort_tag(inputs.cohort),
        vocabulary,
        matrix,
        runs,
        sweep: inputs.ks.len() > 1,
    })
}

pub fn sweep_rows(report: &TopicReport) -> Vec<SweepRow> {
    let x_norm = report.matrix.matrix.frobenius_sq().sqrt();
    report
        .runs
        .iter()
        .map(|r| {
            let residual = crate::topics::nmf::residual_sq(&report.matrix.matrix, &r.model.w, &r.model.h).sqrt();
            SweepRow {
                k: r.model.k(),
                n_iter: r.model.n_iter(),
                converged: r.model.converged,
                final_objective: r.model.final_objective(),
                relative_residual: if x_norm > 0.0 { residual / x_norm } else { 0.0 },
            }
        })
        .collect()
}

/// Full-precision cell; shortest round-trip formatting keeps dumps lossless.
fn exact(x: f64) -> String {
    format!("{x}")
}

pub fn w_csv(model: &NmfModel) -> Result<String> {
    let header: Vec<String> = std::iter::once("document_id".to_string())
        .chain((0..model.k()).map(|t| format!("topic_{t}")))
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_string(
        &header,
        (0..model.w.nrows()).map(|r| {
            std::iter::once(model.row_ids[r].clone())
                .chain(model.w.row(r).iter().map(|&v| exact(v)))
                .collect()
        }),
    )
}

pub fn h_csv(model: &NmfModel, vocab: &Vocabulary) -> Result<String> {
    let header: Vec<String> = std::iter::once("topic".to_string())
        .chain(vocab.terms.iter().cloned())
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_string(
        &header,
        (0..model.k()).map(|t| {
            std::iter::once(t.to_string())
                .chain(model.h.row(t).iter().map(|&v| exact(v)))
                .collect()
        }),
    )
}

pub fn top_terms_csv(export: &ModelExport) -> Result<String> {
    csv_string(
        &["topic", "rank", "term", "weight"],
        export.topics.iter().flat_map(|t| {
            t.terms.iter().enumerate().map(move |(i, tw)| {
                vec![
                    t.topic.to_string(),
                    (i + 1).to_string(),
                    tw.term.clone(),
                    fmt_num(tw.weight),
                ]
            })
        }),
    )
}

pub fn document_topics_csv(model: &NmfModel) -> Result<String> {
    let assignments = assign_documents(model);
    csv_string(
        &["document_id", "topic", "assigned"],
        model.row_ids.iter().map(|id| {
            let a = assignments[id];
            vec![id.clone(), a.topic.to_string(), a.assigned.to_string()]
        }),
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    csv_string(
        &["k", "n_iter", "converged", "final_objective", "relative_residual"],
        rows.iter().map(|r| {
            vec![
                r.k.to_string(),
                r.n_iter.to_string(),
                r.converged.to_string(),
                fmt_num(r.final_objective),
                fmt_num(r.relative_residual),
            ]
        }),
    )
}

pub fn panels_svg(model: &NmfModel, vocab: &Vocabulary, title: &str) -> Result<String> {
    let panels = (0..model.k())
        .map(|t| {
            Ok(TopicPanel {
                label: format!("Topic {}", t + 1),
                terms: top_terms(model, vocab, t, TOP_TERMS)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(topic_panels(title, &panels, PANEL_COLUMNS))
}

pub fn render(report: &TopicReport, formats: &FormatSet) -> Result<Vec<ReportFile>> {
    let mut files = Vec::new();
    for run in &report.runs {
        let stem = format!("topics_{}_k{}", report.tag, run.model.k());
        if formats.contains(&Format::Json) {
            files.push(ReportFile::new(format!("{stem}_model.json"), json_string(&run.export)?));
        }
        if formats.contains(&Format::Csv) {
            files.push(ReportFile::new(format!("{stem}_W.csv"), w_csv(&run.model)?));
            files.push(ReportFile::new(
                format!("{stem}_H.csv"),
                h_csv(&run.model, &report.vocabulary)?,
            ));
            files.push(ReportFile::new(
                format!("{stem}_top_terms.csv"),
                top_terms_csv(&run.export)?,
            ));
            files.push(ReportFile::new(
                format!("{stem}_document_topics.csv"),
                document_topics_csv(&run.model)?,
            ));
        }
        if formats.contains(&Format::Svg) {
            let title = format!("Top terms per topic ({}, k = {})", report.tag, run.model.k());
            files.push(ReportFile::new(
                format!("{stem}.svg"),
                panels_svg(&run.model, &report.vocabulary, &title)?,
            ));
        }
    }
    if report.sweep {
        let rows = sweep_rows(report);
        if formats.contains(&Format::Csv) {
            files.push(ReportFile::new(
                format!("topics_{}_k_sweep.csv", report.tag),
                sweep_csv(&rows)?,
            ));
        }
        if formats.contains(&Format::Json) {
            files.push(ReportFile::new(
                format!("topics_{}_k_sweep.json", report.tag),
                json_string(&rows)?,
            ));
        }
    }
    Ok(files)
}
