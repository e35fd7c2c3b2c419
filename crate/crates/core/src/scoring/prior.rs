//! The prior scorer: a claim's training-set mention rate, applied to every
//! speech without reading its text.

use std::collections::BTreeMap;

use crate::annotation::{compute_priors, MentionVerdict};
use crate::corpus::Speech;

use super::{ScoredPair, Scorer};

pub struct PriorScorer {
    priors: BTreeMap<String, f64>,
    default_score: f64,
}

impl PriorScorer {
    /// Priors from training verdicts; claims unseen in training score
    /// `default_score`.
    pub fn from_verdicts(train: &[MentionVerdict], default_score: f64) -> Self {
        PriorScorer {
            priors: compute_priors(train),
            default_score,
        }
    }

    pub fn prior(&self, claim_id: &str) -> Option<f64> {
        self.priors.get(claim_id).copied()
    }
}

impl Scorer for PriorScorer {
    fn name(&self) -> &str {
        "prior"
    }

    fn score_many(&self, claim_ids: &[String], speech: &Speech) -> Vec<ScoredPair> {
        claim_ids
            .iter()
            .map(|claim_id| ScoredPair {
                claim_id: claim_id.clone(),
                speech_id: speech.speech_id.clone(),
                score: self
                    .priors
                    .get(claim_id)
                    .copied()
                    .unwrap_or(self.default_score),
                best_sentence_index: None,
            })
            .collect()
    }
}
