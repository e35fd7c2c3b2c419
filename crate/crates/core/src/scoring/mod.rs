//! Claim-mention scorers and the funnel that feeds them.
//!
//! Every scoring strategy implements [`Scorer`] and is registered by name
//! in a [`ScorerRegistry`], so runs select strategies from configuration:
//!
//! - `w2v-g` — tf-idf weighted embedding similarity against instantiated
//!   knowledge-base claims,
//! - `w2v-p` / `w2v-pd` — the same similarity against topic-specific claim
//!   texts or their detailed descriptions,
//! - `prior` — each claim's training-set mention rate, ignoring the speech,
//! - `external-direct` / `external-max` — scores ingested from a file.

mod embedding;
mod external;
mod funnel;
mod prior;
mod registry;

pub use embedding::{ClaimTextLookup, EmbeddingScorer};
pub use external::{ExternalAggregation, ExternalScorer};
pub use funnel::{
    funnel, funnel_candidates, generate_rebuttal, render_rebuttal_text, FunnelConfig,
    RebuttalEntry, RebuttalResponse, RelevanceMode,
};
pub use prior::PriorScorer;
pub use registry::{ScorerFactory, ScorerInputs, ScorerRegistry};

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::corpus::{EmbeddingTable, Speech};
use crate::error::{Error, Result};
use crate::text;

/// Inverse document frequency weights with a default for unseen tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    weights: BTreeMap<String, f64>,
    default_weight: f64,
}

impl IdfTable {
    pub fn new(weights: BTreeMap<String, f64>, default_weight: f64) -> Result<Self> {
        if !default_weight.is_finite() {
            return Err(Error::InvalidInput("non-finite default idf weight".into()));
        }
        if let Some((token, w)) = weights.iter().find(|(_, w)| !w.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite idf weight for `{token}`: {w}"
            )));
        }
        Ok(IdfTable {
            weights,
            default_weight,
        })
    }

    /// A table that assigns the same weight to every token.
    pub fn uniform(weight: f64) -> Self {
        IdfTable {
            weights: BTreeMap::new(),
            default_weight: weight,
        }
    }

    /// Add-one smoothed idf over the speech sentences, one sentence per
    /// document: idf(t) = ln((N+1)/(df+1)) + 1. Unseen tokens get the
    /// df = 0 weight.
    pub fn from_sentence_corpus(speeches: &[Speech]) -> Self {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        let mut n = 0usize;
        for speech in speeches {
            for sentence in &speech.sentences {
                n += 1;
                let distinct: std::collections::BTreeSet<String> =
                    text::tokenize(sentence).into_iter().collect();
                for token in distinct {
                    *df.entry(token).or_default() += 1;
                }
            }
        }
        let n1 = (n + 1) as f64;
        let weights = df
            .into_iter()
            .map(|(token, d)| (token, (n1 / (d + 1) as f64).ln() + 1.0))
            .collect();
        IdfTable {
            weights,
            default_weight: n1.ln() + 1.0,
        }
    }

    /// Load weights from a `token,idf` CSV.
    pub fn load_csv(path: impl AsRef<std::path::Path>, default_weight: f64) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::Reader::from_reader(file);
        let headers = reader
            .headers()
            .map_err(|e| Error::schema(path, 1, e.to_string()))?;
        let found: Vec<&str> = headers.iter().collect();
        if found != ["token", "idf"] {
            return Err(Error::Header {
                path: path.to_path_buf(),
                expected: "token,idf".into(),
                found: found.join(","),
            });
        }
        let mut weights = BTreeMap::new();
        for row in reader.records() {
            let record = row.map_err(|e| crate::corpus::csv_error(path, e))?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let token = record
                .get(0)
                .ok_or_else(|| Error::schema(path, line, "missing token"))?;
            let weight: f64 = record
                .get(1)
                .ok_or_else(|| Error::schema(path, line, "missing idf"))?
                .parse()
                .map_err(|e| Error::schema(path, line, format!("bad idf: {e}")))?;
            weights.insert(token.to_string(), weight);
        }
        IdfTable::new(weights, default_weight)
    }

    pub fn get(&self, token: &str) -> f64 {
        self.weights
            .get(token)
            .copied()
            .unwrap_or(self.default_weight)
    }

    pub fn default_weight(&self) -> f64 {
        self.default_weight
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Every weight (including the default) multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        IdfTable {
            weights: self
                .weights
                .iter()
                .map(|(t, w)| (t.clone(), w * factor))
                .collect(),
            default_weight: self.default_weight * factor,
        }
    }
}

/// Σ tf(t)·idf(t)·emb(t) over in-vocabulary tokens, L2-normalized. An empty
/// or fully out-of-vocabulary input embeds to the zero vector. Tokens are
/// accumulated in sorted order so the result is bit-stable.
pub fn embed_weighted(tokens: &[String], embeddings: &EmbeddingTable, idf: &IdfTable) -> Vec<f64> {
    let dim = embeddings.dimension();
    let mut v = vec![0.0f64; dim];
    let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *tf.entry(t.as_str()).or_default() += 1;
    }
    let mut any = false;
    for (token, count) in tf {
        if let Some(e) = embeddings.get(token) {
            any = true;
            let w = count as f64 * idf.get(token);
            for (acc, x) in v.iter_mut().zip(e) {
                *acc += w * x;
            }
        }
    }
    if !any {
        return v;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut v {
            *x /= norm;
        }
    }
    v
}

/// Cosine similarity, 0 when either vector has zero norm, clamped to
/// [-1, 1] against rounding drift.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Tokenizer + embedding table + idf weights, bundled for convenience.
#[derive(Debug, Clone)]
pub struct TextEmbedder {
    embeddings: Arc<EmbeddingTable>,
    idf: Arc<IdfTable>,
    stopwords: Option<Arc<HashSet<String>>>,
}

impl TextEmbedder {
    pub fn new(embeddings: Arc<EmbeddingTable>, idf: Arc<IdfTable>) -> Self {
        TextEmbedder {
            embeddings,
            idf,
            stopwords: None,
        }
    }

    pub fn with_stopwords(mut self, stopwords: Arc<HashSet<String>>) -> Self {
        self.stopwords = Some(stopwords);
        self
    }

    pub fn tokens(&self, text_in: &str) -> Vec<String> {
        let tokens = text::tokenize(text_in);
        match &self.stopwords {
            Some(stop) => tokens.into_iter().filter(|t| !stop.contains(t)).collect(),
            None => tokens,
        }
    }

    pub fn embed(&self, text_in: &str) -> Vec<f64> {
        embed_weighted(&self.tokens(text_in), &self.embeddings, &self.idf)
    }

    pub fn dimension(&self) -> usize {
        self.embeddings.dimension()
    }
}

/// One claim scored against one speech.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPair {
    pub claim_id: String,
    pub speech_id: String,
    pub score: f64,
    /// Index of the maximizing sentence, for scorers that read the text.
    pub best_sentence_index: Option<usize>,
}

/// Maximum cosine similarity between the claim and any sentence of the
/// speech; ties resolve to the lowest sentence index.
pub fn score_claim_speech(
    claim_id: &str,
    claim_text: &str,
    speech: &Speech,
    embedder: &TextEmbedder,
) -> ScoredPair {
    let claim_vec = embedder.embed(claim_text);
    let sentence_vecs: Vec<Vec<f64>> = speech.sentences.iter().map(|s| embedder.embed(s)).collect();
    best_over_sentences(claim_id, &speech.speech_id, &claim_vec, &sentence_vecs)
}

pub(crate) fn best_over_sentences(
    claim_id: &str,
    speech_id: &str,
    claim_vec: &[f64],
    sentence_vecs: &[Vec<f64>],
) -> ScoredPair {
    let mut best: Option<(usize, f64)> = None;
    for (idx, sv) in sentence_vecs.iter().enumerate() {
        let sim = cosine(claim_vec, sv).expect("embedder emits fixed-dimension vectors");
        let better = match best {
            None => true,
            Some((_, s)) => sim > s,
        };
        if better {
            best = Some((idx, sim));
        }
    }
    match best {
        Some((idx, score)) => ScoredPair {
            claim_id: claim_id.to_string(),
            speech_id: speech_id.to_string(),
            score,
            best_sentence_index: Some(idx),
        },
        None => ScoredPair {
            claim_id: claim_id.to_string(),
            speech_id: speech_id.to_string(),
            score: 0.0,
            best_sentence_index: None,
        },
    }
}

/// A claim-mention scoring strategy. Implementations are immutable after
/// construction and safe to share across threads.
pub trait Scorer: Send + Sync {
    /// Registry name of the strategy this scorer was built from.
    fn name(&self) -> &str;

    /// Score each claim against the speech, in input order.
    fn score_many(&self, claim_ids: &[String], speech: &Speech) -> Vec<ScoredPair>;

    fn score(&self, claim_id: &str, speech: &Speech) -> ScoredPair {
        self.score_many(&[claim_id.to_string()], speech)
            .pop()
            .expect("score_many returns one pair per claim")
    }
}
