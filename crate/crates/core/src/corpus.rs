//! Transcript corpus ingestion, emotion-utterance selection and chunking.
//!
//! A corpus is a flat table of utterance rows (JSON lines or CSV) that is
//! grouped into [`Transcript`]s. Every row repeats its transcript's metadata;
//! the parser checks that the repetitions agree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxonomy::LabelClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Cohort {
    IddFamily,
    Peer,
}

impl Cohort {
    pub const ALL: [Cohort; 2] = [Cohort::IddFamily, Cohort::Peer];

    pub fn as_str(self) -> &'static str {
        match self {
            Cohort::IddFamily => "IDD_FAMILY",
            Cohort::Peer => "PEER",
        }
    }

    /// Short lowercase tag used in report file and column names.
    pub fn tag(self) -> &'static str {
        match self {
            Cohort::IddFamily => "idd",
            Cohort::Peer => "peer",
        }
    }
}

impl FromStr for Cohort {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "IDD_FAMILY" => Ok(Cohort::IddFamily),
            "PEER" => Ok(Cohort::Peer),
            other => Err(format!("unknown cohort `{other}` (expected IDD_FAMILY or PEER)")),
        }
    }
}

impl fmt::Display for Cohort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TimePoint {
    T1,
    T2,
}

impl TimePoint {
    pub const ALL: [TimePoint; 2] = [TimePoint::T1, TimePoint::T2];

    pub fn as_str(self) -> &'static str {
        match self {
            TimePoint::T1 => "T1",
            TimePoint::T2 => "T2",
        }
    }
}

impl FromStr for TimePoint {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "T1" => Ok(TimePoint::T1),
            "T2" => Ok(TimePoint::T2),
            other => Err(format!("unknown time_point `{other}` (expected T1 or T2)")),
        }
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DyadKind {
    ParentParentOrSibling,
    ParentChild,
    Friends,
}

impl DyadKind {
    pub const ALL: [DyadKind; 3] = [
        DyadKind::ParentParentOrSibling,
        DyadKind::ParentChild,
        DyadKind::Friends,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DyadKind::ParentParentOrSibling => "PARENT_PARENT_OR_SIBLING",
            DyadKind::ParentChild => "PARENT_CHILD",
            DyadKind::Friends => "FRIENDS",
        }
    }

    /// Friends are the peer reference group; the other dyads are IDD families.
    pub fn cohort(self) -> Cohort {
        match self {
            DyadKind::Friends => Cohort::Peer,
            _ => Cohort::IddFamily,
        }
    }
}

impl FromStr for DyadKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        DyadKind::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown dyad_kind `{s}`"))
    }
}

impl fmt::Display for DyadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub transcript_id: String,
    pub line_index: usize,
    pub speaker: String,
    pub text: String,
    /// Researcher codes, e.g. "expresses joy". Empty when uncoded.
    pub labels: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub id: String,
    pub cohort: Cohort,
    pub time_point: TimePoint,
    pub dyad_kind: DyadKind,
    pub utterances: Vec<Utterance>,
}

/// A topic-model document: a run of consecutive utterances from one transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub source_transcript: String,
    pub chunk_index: usize,
    /// Raw utterance texts in the chunk, in order.
    pub lines: Vec<String>,
    /// Normalized tokens; empty until filled by `textprep`.
    pub tokens: Vec<String>,
}

impl Document {
    pub fn utterance_count(&self) -> usize {
        self.lines.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    JsonLines,
    Csv,
}

impl CorpusFormat {
    /// Guess from the file extension (`.jsonl`/`.ndjson`/`.json` or `.csv`).
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "jsonl" | "ndjson" | "json" => Some(CorpusFormat::JsonLines),
            "csv" => Some(CorpusFormat::Csv),
            _ => None,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json_lines" | "json-lines" => Ok(CorpusFormat::JsonLines),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(format!("unknown corpus format `{other}`")),
        }
    }
}

/// One parsed input row before grouping.
struct Row {
    line: usize,
    transcript_id: String,
    line_index: usize,
    speaker: String,
    text: String,
    labels: BTreeSet<String>,
    cohort: Cohort,
    time_point: TimePoint,
    dyad_kind: DyadKind,
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<Transcript>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(file, format, &path.display().to_string())
}

/// Parse a corpus from a byte stream. `source_name` is used in error messages.
pub fn parse_corpus<R: Read>(reader: R, format: CorpusFormat, source_name: &str) -> Result<Vec<Transcript>> {
    let rows = match format {
        CorpusFormat::JsonLines => read_json_lines(reader, source_name)?,
        CorpusFormat::Csv => read_csv(reader, source_name)?,
    };
    group_rows(rows, source_name)
}

fn parse_enum<T: FromStr<Err = String>>(value: &str, source_name: &str, line: usize, field: &str) -> Result<T> {
    value
        .parse()
        .map_err(|msg: String| Error::parse(source_name, line, field, msg))
}

fn read_json_lines<R: Read>(reader: R, source_name: &str) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::parse(source_name, line_no, "<line>", e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| Error::parse(source_name, line_no, "<json>", e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse(source_name, line_no, "<json>", "expected a JSON object"))?;

        let string_field = |field: &str| -> Result<String> {
            match obj.get(field) {
                Some(serde_json::Value::String(s)) => Ok(s.clone()),
                Some(_) => Err(Error::parse(source_name, line_no, field, "expected a string")),
                None => Err(Error::parse(source_name, line_no, field, "missing")),
            }
        };

        let line_index = match obj.get("line_index") {
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::parse(source_name, line_no, "line_index", "expected a nonnegative integer"))?
                as usize,
            None => return Err(Error::parse(source_name, line_no, "line_index", "missing")),
        };

        let labels = match obj.get("labels") {
            None | Some(serde_json::Value::Null) => BTreeSet::new(),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(normalize_label)
                        .ok_or_else(|| Error::parse(source_name, line_no, "labels", "expected strings"))
                })
                .collect::<Result<BTreeSet<_>>>()?,
            Some(_) => {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "labels",
                    "expected an array of strings",
                ))
            }
        };

        rows.push(Row {
            line: line_no,
            transcript_id: string_field("transcript_id")?,
            line_index,
            speaker: string_field("speaker")?,
            text: string_field("text")?,
            labels,
            cohort: parse_enum(&string_field("cohort")?, source_name, line_no, "cohort")?,
            time_point: parse_enum(&string_field("time_point")?, source_name, line_no, "time_point")?,
            dyad_kind: parse_enum(&string_field("dyad_kind")?, source_name, line_no, "dyad_kind")?,
        });
    }
    Ok(rows)
}

const CSV_FIELDS: [&str; 8] = [
    "transcript_id",
    "line_index",
    "speaker",
    "text",
    "labels",
    "cohort",
    "time_point",
    "dyad_kind",
];

fn read_csv<R: Read>(reader: R, source_name: &str) -> Result<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(source_name, 1, "<header>", e.to_string()))?
        .clone();
    let mut column = HashMap::new();
    for field in CSV_FIELDS {
        match headers.iter().position(|h| h.trim() == field) {
            Some(idx) => {
                column.insert(field, idx);
            }
            // labels is optional
            None if field == "labels" => {}
            None => return Err(Error::parse(source_name, 1, field, "missing column")),
        }
    }

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::parse(source_name, line, "<record>", e.to_string())
        })?;
        let line_no = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let get = |field: &str| -> &str { column.get(field).and_then(|&idx| record.get(idx)).unwrap_or("") };
        let line_index = get("line_index")
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(source_name, line_no, "line_index", "expected a nonnegative integer"))?;
        let labels = get("labels")
            .split(';')
            .map(normalize_label)
            .filter(|l| !l.is_empty())
            .collect();
        rows.push(Row {
            line: line_no,
            transcript_id: require_nonempty(get("transcript_id"), source_name, line_no, "transcript_id")?,
            line_index,
            speaker: get("speaker").to_string(),
            text: get("text").to_string(),
            labels,
            cohort: parse_enum(get("cohort").trim(), source_name, line_no, "cohort")?,
            time_point: parse_enum(get("time_point").trim(), source_name, line_no, "time_point")?,
            dyad_kind: parse_enum(get("dyad_kind").trim(), source_name, line_no, "dyad_kind")?,
        });
    }
    Ok(rows)
}

fn require_nonempty(value: &str, source_name: &str, line: usize, field: &str) -> Result<String> {
    let value = value.trim();
    if value.is_empty() {
        Err(Error::parse(source_name, line, field, "must not be empty"))
    } else {
        Ok(value.to_string())
    }
}

fn normalize_label(label: &str) -> String {
    label.trim().to_lowercase()
}

fn group_rows(rows: Vec<Row>, source_name: &str) -> Result<Vec<Transcript>> {
    let mut order: Vec<String> = Vec::new();
    let mut grouped: HashMap<String, Transcript> = HashMap::new();
    let mut seen: BTreeSet<(String, usize)> = BTreeSet::new();

    for row in rows {
        if row.transcript_id.is_empty() {
            return Err(Error::parse(
                source_name,
                row.line,
                "transcript_id",
                "must not be empty",
            ));
        }
        if !seen.insert((row.transcript_id.clone(), row.line_index)) {
            return Err(Error::DuplicateLine {
                transcript_id: row.transcript_id,
                line_index: row.line_index,
            });
        }
        if row.dyad_kind.cohort() != row.cohort {
            return Err(Error::parse(
                source_name,
                row.line,
                "cohort",
                format!("dyad_kind {} requires cohort {}", row.dyad_kind, row.dyad_kind.cohort()),
            ));
        }
        if row.text.trim().is_empty() && row.labels.is_empty() {
            return Err(Error::parse(
                source_name,
                row.line,
                "text",
                "empty text is only allowed on a labeled utterance",
            ));
        }

        let transcript = grouped.entry(row.transcript_id.clone()).or_insert_with(|| {
            order.push(row.transcript_id.clone());
            Transcript {
                id: row.transcript_id.clone(),
                cohort: row.cohort,
                time_point: row.time_point,
                dyad_kind: row.dyad_kind,
                utterances: Vec::new(),
            }
        });
        for (field, same) in [
            ("cohort", transcript.cohort == row.cohort),
            ("time_point", transcript.time_point == row.time_point),
            ("dyad_kind", transcript.dyad_kind == row.dyad_kind),
        ] {
            if !same {
                return Err(Error::parse(
                    source_name,
                    row.line,
                    field,
                    format!("disagrees with earlier rows of transcript `{}`", row.transcript_id),
                ));
            }
        }
        transcript.utterances.push(Utterance {
            transcript_id: row.transcript_id,
            line_index: row.line_index,
            speaker: row.speaker,
            text: row.text,
            labels: row.labels,
        });
    }

    let mut transcripts = Vec::with_capacity(order.len());
    for id in order {
        let mut transcript = grouped.remove(&id).expect("grouped transcript");
        transcript.utterances.sort_by_key(|u| u.line_index);
        if let Some((pos, u)) = transcript
            .utterances
            .iter()
            .enumerate()
            .find(|(pos, u)| u.line_index != *pos)
        {
            return Err(Error::InvalidTranscript {
                transcript_id: id,
                message: format!(
                    "line_index values must be contiguous from 0; expected {pos}, found {}",
                    u.line_index
                ),
            });
        }
        transcripts.push(transcript);
    }
    Ok(transcripts)
}

/// Researcher label → canonical class table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    entries: BTreeMap<String, LabelClass>,
}

pub const DEFAULT_LABEL_MAP: &str = include_str!("../data/label_map.tsv");

impl LabelMap {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LABEL_MAP, "<builtin label_map.tsv>").expect("builtin label map parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse `raw_label<TAB>canonical_emotion` rows; `#` starts a comment line.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (raw, target) = match (cols.next(), cols.next(), cols.next()) {
                (Some(raw), Some(target), None) => (raw, target),
                _ => {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        "<row>",
                        "expected `raw_label<TAB>canonical_emotion`",
                    ))
                }
            };
            let raw = normalize_label(raw);
            if raw.is_empty() {
                return Err(Error::parse(source_name, line_no, "raw_label", "must not be empty"));
            }
            let class: LabelClass = target.trim().parse().map_err(|e: crate::taxonomy::UnknownEmotion| {
                Error::parse(source_name, line_no, "canonical_emotion", e.to_string())
            })?;
            if entries.insert(raw.clone(), class).is_some() {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    "raw_label",
                    format!("`{raw}` mapped twice"),
                ));
            }
        }
        Ok(Self { entries })
    }

    pub fn insert(&mut self, raw: &str, class: LabelClass) {
        self.entries.insert(normalize_label(raw), class);
    }

    pub fn get(&self, raw: &str) -> Option<LabelClass> {
        self.entries.get(&normalize_label(raw)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An emotion-coded utterance paired with one canonical researcher class.
#[derive(Debug, Clone, Copy)]
pub struct SelectedUtterance<'a> {
    pub transcript: &'a Transcript,
    pub utterance: &'a Utterance,
    pub class: LabelClass,
}

#[derive(Debug, Clone, Default)]
pub struct EmotionSubset<'a> {
    pub pairs: Vec<SelectedUtterance<'a>>,
    /// Labels seen in the corpus that the map does not cover.
    pub unmapped: BTreeMap<String, usize>,
}

impl<'a> EmotionSubset<'a> {
    /// Distinct utterances in the subset, in corpus order.
    pub fn utterances(&self) -> Vec<(&'a Transcript, &'a Utterance)> {
        let mut out: Vec<(&Transcript, &Utterance)> = Vec::new();
        for pair in &self.pairs {
            let dup = out
                .last()
                .is_some_and(|(t, u)| t.id == pair.transcript.id && u.line_index == pair.utterance.line_index);
            if !dup {
                out.push((pair.transcript, pair.utterance));
            }
        }
        out
    }
}

/// Keep utterances carrying at least one mapped label, one pair per distinct
/// canonical class.
pub fn select_emotion_utterances<'a>(transcripts: &'a [Transcript], label_map: &LabelMap) -> EmotionSubset<'a> {
    let mut subset = EmotionSubset::default();
    for transcript in transcripts {
        for utterance in &transcript.utterances {
            let mut classes = BTreeSet::new();
            for label in &utterance.labels {
                match label_map.get(label) {
                    Some(class) => {
                        classes.insert(class);
                    }
                    None => *subset.unmapped.entry(label.clone()).or_default() += 1,
                }
            }
            subset.pairs.extend(classes.into_iter().map(|class| SelectedUtterance {
                transcript,
                utterance,
                class,
            }));
        }
    }
    subset
}

/// Split each transcript into consecutive documents of `chunk_size` utterances.
pub fn chunk_transcripts(transcripts: &[Transcript], chunk_size: usize) -> Result<Vec<Document>> {
    if chunk_size == 0 {
        return Err(Error::invalid("chunk_size", "must be at least 1"));
    }
    let mut documents = Vec::new();
    for transcript in transcripts {
        for (chunk_index, chunk) in transcript.utterances.chunks(chunk_size).enumerate() {
            documents.push(Document {
                id: format!("{}#{}", transcript.id, chunk_index),
                source_transcript: transcript.id.clone(),
                chunk_index,
                lines: chunk.iter().map(|u| u.text.clone()).collect(),
                tokens: Vec::new(),
            });
        }
    }
    Ok(documents)
}
