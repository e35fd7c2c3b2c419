//! Ingestion of scores produced outside the workbench (e.g. a fine-tuned
//! neural scorer), replayed through the same evaluation path.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::corpus::{sentence_key, ExternalScoreFile, Speech};

use super::{ScoredPair, Scorer};

/// How file entries map onto claim-speech scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExternalAggregation {
    /// Entries are keyed by speech id and used as-is.
    #[default]
    Direct,
    /// Entries are keyed by sentence; the claim-speech score is the maximum
    /// over (optionally candidate-restricted) sentences.
    MaxOverSentences,
}

impl std::str::FromStr for ExternalAggregation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "direct" => Ok(ExternalAggregation::Direct),
            "max_over_sentences" | "max" => Ok(ExternalAggregation::MaxOverSentences),
            other => Err(format!(
                "external aggregation must be `direct` or `max_over_sentences`, got `{other}`"
            )),
        }
    }
}

pub struct ExternalScorer {
    name: String,
    scores: Arc<ExternalScoreFile>,
    aggregation: ExternalAggregation,
    /// Score of pairs the file does not cover; ranks them last.
    missing_score: f64,
    /// Sentence candidates per claim, as (claim_id, sentence_key); when
    /// present, only candidate sentences contribute to the maximum.
    candidates: Option<Arc<BTreeSet<(String, String)>>>,
}

impl ExternalScorer {
    pub fn new(
        name: impl Into<String>,
        scores: Arc<ExternalScoreFile>,
        aggregation: ExternalAggregation,
        missing_score: f64,
        candidates: Option<Arc<BTreeSet<(String, String)>>>,
    ) -> Self {
        ExternalScorer {
            name: name.into(),
            scores,
            aggregation,
            missing_score,
            candidates,
        }
    }
}

impl Scorer for ExternalScorer {
    fn name(&self) -> &str {
        &self.name
    }

    fn score_many(&self, claim_ids: &[String], speech: &Speech) -> Vec<ScoredPair> {
        claim_ids
            .iter()
            .map(|claim_id| match self.aggregation {
                ExternalAggregation::Direct => ScoredPair {
                    claim_id: claim_id.clone(),
                    speech_id: speech.speech_id.clone(),
                    score: self
                        .scores
                        .get(claim_id, &speech.speech_id)
                        .unwrap_or(self.missing_score),
                    best_sentence_index: None,
                },
                ExternalAggregation::MaxOverSentences => {
                    let mut best: Option<(usize, f64)> = None;
                    for idx in 0..speech.sentences.len() {
                        let key = sentence_key(&speech.speech_id, idx);
                        if let Some(cands) = &self.candidates {
                            if !cands.contains(&(claim_id.clone(), key.clone())) {
                                continue;
                            }
                        }
                        if let Some(score) = self.scores.get(claim_id, &key) {
                            let better = match best {
                                None => true,
                                Some((_, s)) => score > s,
                            };
                            if better {
                                best = Some((idx, score));
                            }
                        }
                    }
                    match best {
                        Some((idx, score)) => ScoredPair {
                            claim_id: claim_id.clone(),
                            speech_id: speech.speech_id.clone(),
                            score,
                            best_sentence_index: Some(idx),
                        },
                        None => ScoredPair {
                            claim_id: claim_id.clone(),
                            speech_id: speech.speech_id.clone(),
                            score: self.missing_score,
                            best_sentence_index: None,
                        },
                    }
                }
            })
            .collect()
    }
}
