//! Name-keyed registry of scoring strategies. Factories receive the shared
//! inputs plus fold-specific training verdicts, so cross-validation can
//! rebuild scorers per fold through one interface.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use crate::annotation::MentionVerdict;
use crate::corpus::{EmbeddingTable, ExternalScoreFile, IdebateClaim, Motion};
use crate::error::{Error, Result};
use crate::kb::{InstantiateOptions, KnowledgeBase};

use super::{
    EmbeddingScorer, ExternalAggregation, ExternalScorer, IdfTable, PriorScorer, Scorer,
    TextEmbedder,
};

/// Everything a factory may draw on. Absent inputs fail construction of the
/// strategies that need them, naming the missing piece.
#[derive(Clone, Default)]
pub struct ScorerInputs {
    pub embeddings: Option<Arc<EmbeddingTable>>,
    pub idf: Option<Arc<IdfTable>>,
    pub stopwords: Option<Arc<HashSet<String>>>,
    pub kb: Option<Arc<KnowledgeBase>>,
    pub motions: Option<Arc<Vec<Motion>>>,
    pub idebate_claims: Option<Arc<Vec<IdebateClaim>>>,
    pub external_scores: Option<Arc<ExternalScoreFile>>,
    /// (claim_id, sentence_key) pairs restricting `external-max`.
    pub candidate_sentences: Option<Arc<BTreeSet<(String, String)>>>,
    pub instantiate: InstantiateOptions,
    /// Score for pairs an external file does not cover.
    pub external_missing_score: f64,
    /// Score for claims unseen by the prior scorer's training data.
    pub prior_default: f64,
}

impl ScorerInputs {
    pub fn new() -> Self {
        ScorerInputs {
            external_missing_score: -1.0e9,
            prior_default: 0.0,
            ..Default::default()
        }
    }

    fn embedder(&self, scorer: &str) -> Result<TextEmbedder> {
        let embeddings = self
            .embeddings
            .clone()
            .ok_or_else(|| Error::MissingScorerInput {
                scorer: scorer.into(),
                input: "an embeddings table".into(),
            })?;
        let idf = self.idf.clone().ok_or_else(|| Error::MissingScorerInput {
            scorer: scorer.into(),
            input: "idf weights".into(),
        })?;
        let mut embedder = TextEmbedder::new(embeddings, idf);
        if let Some(stop) = &self.stopwords {
            embedder = embedder.with_stopwords(stop.clone());
        }
        Ok(embedder)
    }
}

/// Builds one strategy from shared inputs and fold-local training verdicts.
pub trait ScorerFactory: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self, inputs: &ScorerInputs, train: &[MentionVerdict]) -> Result<Box<dyn Scorer>>;
}

struct KbEmbeddingFactory;

impl ScorerFactory for KbEmbeddingFactory {
    fn name(&self) -> &'static str {
        "w2v-g"
    }
    fn description(&self) -> &'static str {
        "tf-idf weighted embedding similarity against instantiated knowledge-base claims"
    }
    fn build(&self, inputs: &ScorerInputs, _train: &[MentionVerdict]) -> Result<Box<dyn Scorer>> {
        let kb = inputs
            .kb
            .as_ref()
            .ok_or_else(|| Error::MissingScorerInput {
                scorer: self.name().into(),
                input: "a knowledge base".into(),
            })?;
        let motions = inputs
            .motions
            .as_ref()
            .ok_or_else(|| Error::MissingScorerInput {
                scorer: self.name().into(),
                input: "motions".into(),
            })?;
        let embedder = inputs.embedder(self.name())?;
        Ok(Box::new(EmbeddingScorer::from_kb(
            self.name(),
            embedder,
            kb,
            motions,
            &inputs.instantiate,
        )?))
    }
}

struct IdebateEmbeddingFactory {
    detailed: bool,
}

impl ScorerFactory for IdebateEmbeddingFactory {
    fn name(&self) -> &'static str {
        if self.detailed {
            "w2v-pd"
        } else {
            "w2v-p"
        }
    }
    fn description(&self) -> &'static str {
        if self.detailed {
            "tf-idf weighted embedding similarity against detailed claim descriptions"
        } else {
            "tf-idf weighted embedding similarity against topic-specific claim texts"
        }
    }
    fn build(&self, inputs: &ScorerInputs, _train: &[MentionVerdict]) -> Result<Box<dyn Scorer>> {
        let claims = inputs
            .idebate_claims
            .as_ref()
            .ok_or_else(|| Error::MissingScorerInput {
                scorer: self.name().into(),
                input: "topic-specific claims".into(),
            })?;
        let embedder = inputs.embedder(self.name())?;
        Ok(Box::new(EmbeddingScorer::from_idebate(
            self.name(),
            embedder,
            claims,
            self.detailed,
        )))
    }
}

struct PriorFactory;

impl ScorerFactory for PriorFactory {
    fn name(&self) -> &'static str {
        "prior"
    }
    fn description(&self) -> &'static str {
        "training-set mention rate per claim, ignoring the speech text"
    }
    fn build(&self, inputs: &ScorerInputs, train: &[MentionVerdict]) -> Result<Box<dyn Scorer>> {
        Ok(Box::new(PriorScorer::from_verdicts(
            train,
            inputs.prior_default,
        )))
    }
}

struct ExternalFactory {
    aggregation: ExternalAggregation,
}

impl ScorerFactory for ExternalFactory {
    fn name(&self) -> &'static str {
        match self.aggregation {
            ExternalAggregation::Direct => "external-direct",
            ExternalAggregation::MaxOverSentences => "external-max",
        }
    }
    fn description(&self) -> &'static str {
        match self.aggregation {
            ExternalAggregation::Direct => "externally produced claim-speech scores, used as-is",
            ExternalAggregation::MaxOverSentences => {
                "externally produced claim-sentence scores, maximum over candidate sentences"
            }
        }
    }
    fn build(&self, inputs: &ScorerInputs, _train: &[MentionVerdict]) -> Result<Box<dyn Scorer>> {
        let scores = inputs
            .external_scores
            .as_ref()
            .ok_or_else(|| Error::MissingScorerInput {
                scorer: self.name().into(),
                input: "an external score file".into(),
            })?;
        Ok(Box::new(ExternalScorer::new(
            self.name(),
            scores.clone(),
            self.aggregation,
            inputs.external_missing_score,
            inputs.candidate_sentences.clone(),
        )))
    }
}

/// The strategy registry: scorers are selected by name at run time.
pub struct ScorerRegistry {
    factories: BTreeMap<&'static str, Box<dyn ScorerFactory>>,
}

impl ScorerRegistry {
    pub fn empty() -> Self {
        ScorerRegistry {
            factories: BTreeMap::new(),
        }
    }

    /// Registry with every built-in strategy.
    pub fn with_builtins() -> Self {
        let mut registry = ScorerRegistry::empty();
        registry.register(Box::new(KbEmbeddingFactory));
        registry.register(Box::new(IdebateEmbeddingFactory { detailed: false }));
        registry.register(Box::new(IdebateEmbeddingFactory { detailed: true }));
        registry.register(Box::new(PriorFactory));
        registry.register(Box::new(ExternalFactory {
            aggregation: ExternalAggregation::Direct,
        }));
        registry.register(Box::new(ExternalFactory {
            aggregation: ExternalAggregation::MaxOverSentences,
        }));
        registry
    }

    pub fn register(&mut self, factory: Box<dyn ScorerFactory>) {
        self.factories.insert(factory.name(), factory);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn ScorerFactory> {
        self.factories
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownScorer {
                name: name.into(),
                available: self.names().join(", "),
            })
    }

    pub fn build(
        &self,
        name: &str,
        inputs: &ScorerInputs,
        train: &[MentionVerdict],
    ) -> Result<Box<dyn Scorer>> {
        self.get(name)?.build(inputs, train)
    }
}

impl Default for ScorerRegistry {
    fn default() -> Self {
        ScorerRegistry::with_builtins()
    }
}
