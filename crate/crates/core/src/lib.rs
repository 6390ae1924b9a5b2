//! Emotion, sentiment and topic analysis for small corpora of dyadic
//! conversation transcripts.
//!
//! The pipeline: [`corpus`] parses transcripts, [`textprep`] normalizes
//! tokens, [`lexicon`] loads association and polarity lexicons, and
//! [`emotion`], [`sentiment`] and [`topics`] compute the analyses that
//! [`report`] renders to CSV, JSON and SVG. [`cli`] wires it together.

pub mod cli;
pub mod corpus;
pub mod emotion;
pub mod error;
pub mod lexicon;
pub mod report;
pub mod sentiment;
pub mod taxonomy;
pub mod textprep;
pub mod topics;

pub use error::{Error, Result};
