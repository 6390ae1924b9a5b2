use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::corpus::Document;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vocabulary {
    /// Terms in column order (lexicographic).
    pub terms: Vec<String>,
    #[serde(skip)]
    pub index: HashMap<String, usize>,
    /// Number of documents containing each term.
    pub document_frequency: Vec<usize>,
    pub idf: Vec<f64>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Nonnegative matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    /// `row_ptr[r]..row_ptr[r + 1]` indexes the entries of row `r`.
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self {
            n_rows: 0,
            n_cols,
            row_ptr: vec![0],
            col_idx: Vec::new(),
            values: Vec::new(),
        };
        for row in rows {
            assert_eq!(row.len(), n_cols, "ragged dense input");
            m.push_row(row.iter().copied().enumerate().filter(|(_, v)| *v != 0.0));
        }
        m
    }

    fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) {
        for (c, v) in entries {
            self.col_idx.push(c);
            self.values.push(v);
        }
        self.row_ptr.push(self.col_idx.len());
        self.n_rows += 1;
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).find(|(col, _)| *col == c).map_or(0.0, |(_, v)| v)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows)
            .map(|r| {
                let mut row = vec![0.0; self.n_cols];
                for (c, v) in self.row(r) {
                    row[c] = v;
                }
                row
            })
            .collect()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    /// Document ids, one per row.
    pub row_ids: Vec<String>,
    pub matrix: CsrMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfidfOptions {
    pub min_df: usize,
    pub max_df_ratio: f64,
}

impl Default for TfidfOptions {
    fn default() -> Self {
        Self {
            min_df: 1,
            max_df_ratio: 1.0,
        }
    }
}

/// Smoothed inverse document frequency, `ln((1 + n) / (1 + df)) + 1`.
pub fn smooth_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Raw-count tf times smoothed idf, rows scaled to unit L2 norm.
///
/// Terms outside `[min_df, max_df_ratio * N]` document frequency are dropped
/// before weighting. Documents left without terms become zero rows.
pub fn build_tfidf(documents: &[Document], options: TfidfOptions) -> Result<(Vocabulary, TermDocMatrix)> {
    if documents.is_empty() {
        return Err(Error::invalid("documents", "at least one document is required"));
    }
    if !(0.0..=1.0).contains(&options.max_df_ratio) {
        return Err(Error::invalid("max_df_ratio", "must be in [0, 1]"));
    }
    let n_docs = documents.len();

    let counts: Vec<BTreeMap<&str, usize>> = documents
        .iter()
        .map(|d| {
            let mut m = BTreeMap::new();
            for t in &d.tokens {
                *m.entry(t.as_str()).or_insert(0) += 1;
            }
            m
        })
        .collect();

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in &counts {
        for term in doc.keys() {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    df.retain(|_, &mut d| d >= options.min_df && d as f64 / n_docs as f64 <= options.max_df_ratio);
    if df.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let terms: Vec<String> = df.keys().map(|t| t.to_string()).collect();
    let index: HashMap<String, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let document_frequency: Vec<usize> = df.values().copied().collect();
    let idf: Vec<f64> = document_frequency.iter().map(|&d| smooth_idf(n_docs, d)).collect();

    let mut matrix = CsrMatrix {
        n_rows: 0,
        n_cols: terms.len(),
        row_ptr: vec![0],
        col_idx: Vec::new(),
        values: Vec::new(),
    };
    for doc in &counts {
        let mut row: Vec<(usize, f64)> = doc
            .iter()
            .filter_map(|(term, &tf)| index.get(*term).map(|&c| (c, tf as f64 * idf[c])))
            .collect();
        row.sort_by_key(|(c, _)| *c);
        let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in &mut row {
                *v /= norm;
            }
        }
        matrix.push_row(row);
    }

    Ok((
        Vocabulary {
            terms,
            index,
            document_frequency,
            idf,
        },
        TermDocMatrix {
            row_ids: documents.iter().map(|d| d.id.clone()).collect(),
            matrix,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, tokens: &[&str]) -> Document {
        Document {
            id: id.into(),
            source_transcript: "t".into(),
            chunk_index: 0,
            lines: vec![],
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
        }
    }

    #[test]
    fn term_in_every_document_has_unit_idf() {
        assert_eq!(smooth_idf(4, 4), 1.0);
        let docs: Vec<_> = (0..4).map(|i| doc(&i.to_string(), &["home", "x"])).collect();
        let (vocab, _) = build_tfidf(&docs, TfidfOptions::default()).unwrap();
        assert_eq!(vocab.idf[vocab.index["home"]], 1.0);
    }

    #[test]
    fn absent_term_is_zero_and_rows_are_unit() {
        let docs = [doc("a", &["money", "home", "home"]), doc("b", &["school"])];
        let (vocab, x) = build_tfidf(&docs, TfidfOptions::default()).unwrap();
        assert_eq!(x.matrix.get(1, vocab.index["money"]), 0.0);
        for r in 0..2 {
            let norm: f64 = x.matrix.row(r).map(|(_, v)| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert_eq!(x.row_ids, vec!["a", "b"]);
    }

    #[test]
    fn df_filters() {
        let docs = [doc("a", &["x", "y"]), doc("b", &["x", "z"]), doc("c", &["x"])];
        let (v, _) = build_tfidf(
            &docs,
            TfidfOptions {
                min_df: 2,
                max_df_ratio: 1.0,
            },
        )
        .unwrap();
        assert_eq!(v.terms, vec!["x"]);
        let (v, x) = build_tfidf(
            &docs,
            TfidfOptions {
                min_df: 1,
                max_df_ratio: 0.5,
            },
        )
        .unwrap();
        assert_eq!(v.terms, vec!["y", "z"]);
        assert_eq!(x.matrix.row(2).count(), 0);
    }

    #[test]
    fn empty_corpus_errors() {
        assert!(matches!(
            build_tfidf(&[doc("a", &[]), doc("b", &[])], TfidfOptions::default()),
            Err(Error::EmptyVocabulary)
        ));
        assert!(build_tfidf(&[], TfidfOptions::default()).is_err());
    }
}
