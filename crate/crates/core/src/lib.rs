//! Workbench for claim detection and rebuttal responses over a
//! general-purpose rebuttal knowledge base.
//!
//! The crate is organized along the pipeline:
//!
//! - [`kb`] — slot-bearing claim/rebuttal templates and their instantiation.
//! - [`corpus`] — motions, speeches, raw crowd annotations, word vectors.
//! - [`text`] — the tokenizer and sentence splitter everything shares.
//! - [`annotation`] — gold-label aggregation, annotator quality control and
//!   agreement statistics.
//! - [`scoring`] — claim-mention scorers behind a common [`scoring::Scorer`]
//!   trait, selected by name from a registry, plus the relevance → stance →
//!   mention funnel and rebuttal assembly.
//! - [`eval`] — precision-recall curves, break-even points, motion-level
//!   splits and figure data.

pub mod annotation;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod kb;
pub mod scoring;
pub mod text;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
