//! Embedding-similarity scorer. The three text variants differ only in
//! where the claim text comes from: instantiated knowledge-base claims,
//! topic-specific claim texts, or their detailed descriptions.

use std::collections::BTreeMap;

use crate::corpus::{IdebateClaim, Motion, Speech};
use crate::error::Result;
use crate::kb::{instantiate, InstantiateOptions, KnowledgeBase};

use super::{best_over_sentences, ScoredPair, Scorer, TextEmbedder};

/// How a claim id resolves to scoreable text.
#[derive(Debug, Clone)]
pub enum ClaimTextLookup {
    /// Keyed by (claim_id, motion_id); used for instantiated templates.
    PerMotion(BTreeMap<(String, String), String>),
    /// Keyed by claim_id alone.
    PerClaim(BTreeMap<String, String>),
}

impl ClaimTextLookup {
    fn get(&self, claim_id: &str, motion_id: &str) -> Option<&str> {
        match self {
            ClaimTextLookup::PerMotion(map) => map
                .get(&(claim_id.to_string(), motion_id.to_string()))
                .map(|s| s.as_str()),
            ClaimTextLookup::PerClaim(map) => map.get(claim_id).map(|s| s.as_str()),
        }
    }
}

/// Scores a claim by the maximum cosine similarity between its text and
/// any sentence of the speech.
pub struct EmbeddingScorer {
    name: String,
    embedder: TextEmbedder,
    texts: ClaimTextLookup,
}

impl EmbeddingScorer {
    pub fn new(name: impl Into<String>, embedder: TextEmbedder, texts: ClaimTextLookup) -> Self {
        EmbeddingScorer {
            name: name.into(),
            embedder,
            texts,
        }
    }

    /// Instantiate every knowledge-base claim for every motion up front.
    pub fn from_kb(
        name: impl Into<String>,
        embedder: TextEmbedder,
        kb: &KnowledgeBase,
        motions: &[Motion],
        opts: &InstantiateOptions,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (claim, _) in kb.pairs() {
            for motion in motions {
                let text = instantiate(&claim.text, motion, opts)?;
                map.insert((claim.claim_id.clone(), motion.motion_id.clone()), text);
            }
        }
        Ok(EmbeddingScorer::new(
            name,
            embedder,
            ClaimTextLookup::PerMotion(map),
        ))
    }

    /// Use topic-specific claim texts; with `detailed` set, the detailed
    /// description is preferred and the claim text is the fallback.
    pub fn from_idebate(
        name: impl Into<String>,
        embedder: TextEmbedder,
        claims: &[IdebateClaim],
        detailed: bool,
    ) -> Self {
        let map = claims
            .iter()
            .map(|c| {
                let text = if detailed {
                    c.detailed_description
                        .clone()
                        .unwrap_or_else(|| c.text.clone())
                } else {
                    c.text.clone()
                };
                (c.claim_id.clone(), text)
            })
            .collect();
        EmbeddingScorer::new(name, embedder, ClaimTextLookup::PerClaim(map))
    }
}

impl Scorer for EmbeddingScorer {
    fn name(&self) -> &str {
        &self.name
    }

    fn score_many(&self, claim_ids: &[String], speech: &Speech) -> Vec<ScoredPair> {
        let sentence_vecs: Vec<Vec<f64>> = speech
            .sentences
            .iter()
            .map(|s| self.embedder.embed(s))
            .collect();
        claim_ids
            .iter()
            .map(
                |claim_id| match self.texts.get(claim_id, &speech.motion_id) {
                    Some(text) => {
                        let claim_vec = self.embedder.embed(text);
                        best_over_sentences(claim_id, &speech.speech_id, &claim_vec, &sentence_vecs)
                    }
                    // A claim this scorer has no text for carries no evidence.
                    None => ScoredPair {
                        claim_id: claim_id.clone(),
                        speech_id: speech.speech_id.clone(),
                        score: 0.0,
                        best_sentence_index: None,
                    },
                },
            )
            .collect()
    }
}
