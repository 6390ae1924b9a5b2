//! TF-IDF weighting, regularized NMF and topic extraction.

pub mod nmf;
pub mod tfidf;

use std::collections::BTreeMap;

use serde::Serialize;

pub use nmf::{fit_matrix, nmf_fit, Init, NmfModel, NmfParams};
pub use tfidf::{build_tfidf, CsrMatrix, TermDocMatrix, TfidfOptions, Vocabulary};

use crate::error::{Error, Result};

/// The `n` heaviest terms of a topic, weight descending, ties by term.
pub fn top_terms(model: &NmfModel, vocab: &Vocabulary, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
    if topic >= model.k() {
        return Err(Error::invalid("topic", format!("{topic} >= k = {}", model.k())));
    }
    let mut rows: Vec<(String, f64)> = vocab
        .terms
        .iter()
        .enumerate()
        .map(|(c, term)| (term.clone(), model.h[(topic, c)]))
        .collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(n);
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DocumentTopic {
    pub topic: usize,
    /// False when the document's weight row is all zeros.
    pub assigned: bool,
}

/// Dominant topic per document (argmax of its W row, lowest index on ties).
pub fn assign_documents(model: &NmfModel) -> BTreeMap<String, DocumentTopic> {
    (0..model.w.nrows())
        .map(|r| {
            let row = model.w.row(r);
            let mut best = 0;
            for t in 1..row.len() {
                if row[t] > row[best] {
                    best = t;
                }
            }
            let id = model.row_ids.get(r).cloned().unwrap_or_else(|| r.to_string());
            (
                id,
                DocumentTopic {
                    topic: best,
                    assigned: row[best] > 0.0,
                },
            )
        })
        .collect()
}

/// One fit per k in `ks`, all with the same remaining hyperparameters.
pub fn k_sweep(x: &TermDocMatrix, base: &NmfParams, ks: impl IntoIterator<Item = usize>) -> Result<Vec<NmfModel>> {
    ks.into_iter().map(|k| nmf_fit(x, &NmfParams { k, ..*base })).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicSummary {
    pub topic: usize,
    pub terms: Vec<TermWeight>,
    pub documents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermWeight {
    pub term: String,
    pub weight: f64,
}

/// Serializable model summary: vocabulary, hyperparameters, objective and
/// top terms for every topic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelExport {
    pub k: usize,
    pub params: NmfParams,
    pub n_documents: usize,
    pub vocabulary: Vec<String>,
    pub document_frequency: Vec<usize>,
    pub n_iter: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub objective_trace: Vec<f64>,
    pub topics: Vec<TopicSummary>,
}

impl ModelExport {
    pub fn new(model: &NmfModel, vocab: &Vocabulary, top_n: usize) -> Result<Self> {
        let assignments = assign_documents(model);
        let topics = (0..model.k())
            .map(|t| {
                Ok(TopicSummary {
                    topic: t,
                    terms: top_terms(model, vocab, t, top_n)?
                        .into_iter()
                        .map(|(term, weight)| TermWeight { term, weight })
                        .collect(),
                    documents: assignments.values().filter(|a| a.assigned && a.topic == t).count(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            k: model.k(),
            params: model.params,
            n_documents: model.w.nrows(),
            vocabulary: vocab.terms.clone(),
            document_frequency: vocab.document_frequency.clone(),
            n_iter: model.n_iter(),
            converged: model.converged,
            final_objective: model.final_objective(),
            objective_trace: model.objective_trace.clone(),
            topics,
        })
    }
}
