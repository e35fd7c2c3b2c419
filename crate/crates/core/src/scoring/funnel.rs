//! The three-stage funnel — relevance filter, stance alignment, mention
//! scoring — and rebuttal assembly on top of it.

use serde::Serialize;

use crate::annotation::RelevanceVerdict;
use crate::corpus::{Motion, Speech, Stance};
use crate::error::Result;
use crate::kb::{instantiate, InstantiateOptions, KnowledgeBase};

use super::{ScoredPair, Scorer};

/// Stage-1 relevance test. Strict uses the gold majority verdict; lenient
/// admits any claim at least `min_votes` annotators found relevant, which
/// matches how candidate claim lists are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelevanceMode {
    #[default]
    Strict,
    Lenient {
        min_votes: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FunnelConfig {
    pub relevance: RelevanceMode,
}

/// Claims that pass stages 1 and 2 for this speech, sorted by claim id:
/// relevant to the motion, stance matching the speaker's side.
pub fn funnel_candidates(
    speech: &Speech,
    motion: &Motion,
    kb: &KnowledgeBase,
    relevance: &[RelevanceVerdict],
    cfg: &FunnelConfig,
) -> Vec<String> {
    let mut survivors = Vec::new();
    for verdict in relevance {
        if verdict.motion_id != motion.motion_id || kb.claim(&verdict.claim_id).is_none() {
            continue;
        }
        let relevant = match cfg.relevance {
            RelevanceMode::Strict => verdict.relevant,
            RelevanceMode::Lenient { min_votes } => {
                verdict.votes.support + verdict.votes.oppose >= min_votes
            }
        };
        if !relevant {
            continue;
        }
        // Stance by majority among support/oppose answers; a tie is
        // undetermined and drops the claim.
        let stance_matches = match speech.stance {
            Stance::Pro => verdict.votes.support > verdict.votes.oppose,
            Stance::Con => verdict.votes.oppose > verdict.votes.support,
        };
        if stance_matches {
            survivors.push(verdict.claim_id.clone());
        }
    }
    survivors.sort();
    survivors.dedup();
    survivors
}

/// Run the funnel: keep claims relevant to the motion whose stance matches
/// the speaker's side, then score the survivors.
pub fn funnel(
    speech: &Speech,
    motion: &Motion,
    kb: &KnowledgeBase,
    relevance: &[RelevanceVerdict],
    scorer: &dyn Scorer,
    cfg: &FunnelConfig,
) -> Vec<ScoredPair> {
    let survivors = funnel_candidates(speech, motion, kb, relevance, cfg);
    scorer.score_many(&survivors, speech)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RebuttalEntry {
    pub claim_id: String,
    pub claim_text: String,
    pub rebuttal_text: String,
    pub score: f64,
    pub best_sentence_index: Option<usize>,
}

/// Ranked rebuttal response for one speech: instantiated claim and rebuttal
/// texts, sorted by descending score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RebuttalResponse {
    pub speech_id: String,
    pub motion_id: String,
    pub scorer: String,
    pub entries: Vec<RebuttalEntry>,
}

/// Funnel survivors scoring at least `decision_threshold`, top
/// `max_responses` by score (ties break by claim id), with claim and
/// rebuttal texts instantiated for the motion.
#[allow(clippy::too_many_arguments)]
pub fn generate_rebuttal(
    speech: &Speech,
    motion: &Motion,
    kb: &KnowledgeBase,
    relevance: &[RelevanceVerdict],
    scorer: &dyn Scorer,
    cfg: &FunnelConfig,
    opts: &InstantiateOptions,
    decision_threshold: f64,
    max_responses: usize,
) -> Result<RebuttalResponse> {
    let mut scored = funnel(speech, motion, kb, relevance, scorer, cfg);
    scored.retain(|p| p.score >= decision_threshold);
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.claim_id.cmp(&b.claim_id))
    });
    scored.truncate(max_responses);
    let mut entries = Vec::with_capacity(scored.len());
    for pair in scored {
        let claim = kb
            .claim(&pair.claim_id)
            .expect("funnel only passes knowledge-base claims");
        let rebuttal = kb
            .rebuttal(&pair.claim_id)
            .expect("knowledge base pairs claims with rebuttals");
        entries.push(RebuttalEntry {
            claim_id: pair.claim_id.clone(),
            claim_text: instantiate(&claim.text, motion, opts)?,
            rebuttal_text: instantiate(&rebuttal.text, motion, opts)?,
            score: pair.score,
            best_sentence_index: pair.best_sentence_index,
        });
    }
    Ok(RebuttalResponse {
        speech_id: speech.speech_id.clone(),
        motion_id: motion.motion_id.clone(),
        scorer: scorer.name().to_string(),
        entries,
    })
}

/// Human-readable rendering of a rebuttal response.
pub fn render_rebuttal_text(response: &RebuttalResponse) -> String {
    let mut out = format!(
        "Speech {} (motion {}, scorer {})\n",
        response.speech_id, response.motion_id, response.scorer
    );
    if response.entries.is_empty() {
        out.push_str("  no claim passed the decision threshold\n");
        return out;
    }
    for entry in &response.entries {
        out.push_str(&format!(
            "  [{}] score {:.4}{}\n    claim:    {}\n    rebuttal: {}\n",
            entry.claim_id,
            entry.score,
            match entry.best_sentence_index {
                Some(idx) => format!(" (best sentence {idx})"),
                None => String::new(),
            },
            entry.claim_text,
            entry.rebuttal_text
        ));
    }
    out
}
