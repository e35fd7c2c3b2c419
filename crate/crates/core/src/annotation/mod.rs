//! Aggregation of raw crowd answers into gold verdicts, plus annotator
//! quality control and agreement statistics.
//!
//! Every aggregation is a pure function of the records for one item and is
//! order-invariant; majorities are strict (more than half of the answers).

mod agreement;
mod filter;

pub use agreement::{
    cohen_kappa, collapse_mention_binary, collapse_plausibility_step1, collapse_relevance_binary,
    pairwise_agreement, probe_error_rate, vs_majority_agreement, AgreementReport, PairAgreement,
    ProbeAnnotatorStats, ProbeErrorReport,
};
pub use filter::{
    filter_annotators, filter_annotators_fixpoint, AnnotatorFilterCriteria, FilterOutcome,
};

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::corpus::{
    sentence_key, AnnotationRecord, Answer, ItemKey, PlausibilityLabel, RelevanceLabel,
    SentenceMentionLabel, Speech, SpeechMentionLabel, Task,
};
use crate::error::{Error, Result};
use crate::scoring::TextEmbedder;

/// Stance of a relevant claim towards its motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStance {
    Support,
    Oppose,
    Undetermined,
    None,
}

impl std::fmt::Display for VerdictStance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictStance::Support => "support",
            VerdictStance::Oppose => "oppose",
            VerdictStance::Undetermined => "undetermined",
            VerdictStance::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RelevanceVotes {
    pub support: usize,
    pub oppose: usize,
    pub not_relevant: usize,
}

impl RelevanceVotes {
    pub fn total(&self) -> usize {
        self.support + self.oppose + self.not_relevant
    }
}

/// Gold relevance of one claim to one motion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelevanceVerdict {
    pub claim_id: String,
    pub motion_id: String,
    pub relevant: bool,
    pub stance: VerdictStance,
    pub votes: RelevanceVotes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MentionVotes {
    pub explicit: usize,
    pub implicit: usize,
    pub not_mentioned: usize,
}

impl MentionVotes {
    pub fn total(&self) -> usize {
        self.explicit + self.implicit + self.not_mentioned
    }
}

/// Gold speech-level mention of one claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MentionVerdict {
    pub claim_id: String,
    pub speech_id: String,
    pub label: SpeechMentionLabel,
    pub votes: MentionVotes,
}

impl MentionVerdict {
    pub fn mentioned(&self) -> bool {
        self.label != SpeechMentionLabel::NotMentioned
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceVerdictLabel {
    Mentioned,
    NotMentioned,
    Insufficient,
}

impl std::fmt::Display for SentenceVerdictLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SentenceVerdictLabel::Mentioned => "mentioned",
            SentenceVerdictLabel::NotMentioned => "not_mentioned",
            SentenceVerdictLabel::Insufficient => "insufficient",
        })
    }
}

/// Gold sentence-level mention, aggregated after annotator filtering; items
/// with fewer than the minimum remaining answers are marked insufficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceMentionVerdict {
    pub claim_id: String,
    pub sentence_key: String,
    pub label: SentenceVerdictLabel,
    pub mentioned_votes: usize,
    pub not_mentioned_votes: usize,
    pub answers_after_filtering: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlausibilityCall {
    Yes,
    No,
    Undetermined,
}

impl std::fmt::Display for PlausibilityCall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PlausibilityCall::Yes => "yes",
            PlausibilityCall::No => "no",
            PlausibilityCall::Undetermined => "undetermined",
        })
    }
}

/// Two-step rebuttal-plausibility verdict: step 1 asks whether the claim is
/// mentioned; only annotators answering yes proceed to judge the rebuttal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlausibilityVerdict {
    pub claim_id: String,
    pub speech_id: String,
    pub plausible: PlausibilityCall,
    pub step1_mentioned_votes: usize,
    pub step2_plausible_votes: usize,
    pub step2_not_plausible_votes: usize,
}

fn validate_item(records: &[AnnotationRecord], task: Task) -> Result<&ItemKey> {
    let first = records.first().ok_or(Error::NoRecords)?;
    if first.task != task {
        return Err(Error::MixedTasks {
            first: task.as_str().into(),
            second: first.task.as_str().into(),
        });
    }
    for r in records {
        if r.task != first.task {
            return Err(Error::MixedTasks {
                first: first.task.as_str().into(),
                second: r.task.as_str().into(),
            });
        }
        if r.item_key != first.item_key {
            return Err(Error::MixedItemKeys {
                first: first.item_key.raw(),
                second: r.item_key.raw(),
            });
        }
    }
    Ok(&first.item_key)
}

fn strict_majority(part: usize, total: usize) -> bool {
    2 * part > total
}

/// A claim is relevant when supporting and opposing votes together form a
/// strict majority; its stance is the larger side, undetermined on a tie.
pub fn aggregate_relevance(records: &[AnnotationRecord]) -> Result<RelevanceVerdict> {
    let key = validate_item(records, Task::Relevance)?.clone();
    let mut votes = RelevanceVotes::default();
    for r in records {
        match r.answer {
            Answer::Relevance(RelevanceLabel::Support) => votes.support += 1,
            Answer::Relevance(RelevanceLabel::Oppose) => votes.oppose += 1,
            Answer::Relevance(RelevanceLabel::NotRelevant) => votes.not_relevant += 1,
            other => {
                return Err(Error::InvalidInput(format!(
                    "answer `{other}` is not a relevance label"
                )))
            }
        }
    }
    let relevant = strict_majority(votes.support + votes.oppose, votes.total());
    let stance = if !relevant {
        VerdictStance::None
    } else if votes.support > votes.oppose {
        VerdictStance::Support
    } else if votes.oppose > votes.support {
        VerdictStance::Oppose
    } else {
        VerdictStance::Undetermined
    };
    Ok(RelevanceVerdict {
        claim_id: key.claim_id,
        motion_id: key.target_id,
        relevant,
        stance,
        votes,
    })
}

/// A claim is mentioned when explicit and implicit answers together form a
/// strict majority; it is explicit only when explicit answers strictly
/// exceed implicit ones.
pub fn aggregate_mention(records: &[AnnotationRecord]) -> Result<MentionVerdict> {
    let key = validate_item(records, Task::SpeechMention)?.clone();
    let mut votes = MentionVotes::default();
    for r in records {
        match r.answer {
            Answer::SpeechMention(SpeechMentionLabel::Explicit) => votes.explicit += 1,
            Answer::SpeechMention(SpeechMentionLabel::Implicit) => votes.implicit += 1,
            Answer::SpeechMention(SpeechMentionLabel::NotMentioned) => votes.not_mentioned += 1,
            other => {
                return Err(Error::InvalidInput(format!(
                    "answer `{other}` is not a speech-mention label"
                )))
            }
        }
    }
    let mentioned = strict_majority(votes.explicit + votes.implicit, votes.total());
    let label = if !mentioned {
        SpeechMentionLabel::NotMentioned
    } else if votes.explicit > votes.implicit {
        SpeechMentionLabel::Explicit
    } else {
        SpeechMentionLabel::Implicit
    };
    Ok(MentionVerdict {
        claim_id: key.claim_id,
        speech_id: key.target_id,
        label,
        votes,
    })
}

/// Sentence-level mention over already-filtered answers; below
/// `min_answers` the item is insufficient rather than labeled.
pub fn aggregate_sentence_mention(
    records: &[AnnotationRecord],
    min_answers: usize,
) -> Result<SentenceMentionVerdict> {
    let key = validate_item(records, Task::SentenceMention)?.clone();
    let mut mentioned_votes = 0usize;
    let mut not_mentioned_votes = 0usize;
    for r in records {
        match r.answer {
            Answer::SentenceMention(SentenceMentionLabel::Mentioned) => mentioned_votes += 1,
            Answer::SentenceMention(SentenceMentionLabel::NotMentioned) => not_mentioned_votes += 1,
            other => {
                return Err(Error::InvalidInput(format!(
                    "answer `{other}` is not a sentence-mention label"
                )))
            }
        }
    }
    let total = mentioned_votes + not_mentioned_votes;
    let label = if total < min_answers {
        SentenceVerdictLabel::Insufficient
    } else if strict_majority(mentioned_votes, total) {
        SentenceVerdictLabel::Mentioned
    } else {
        SentenceVerdictLabel::NotMentioned
    };
    Ok(SentenceMentionVerdict {
        claim_id: key.claim_id,
        sentence_key: key.target_id,
        label,
        mentioned_votes,
        not_mentioned_votes,
        answers_after_filtering: total,
    })
}

/// Plausibility by majority of step-2 answers; a tie or an empty step 2
/// (nobody saw the claim mentioned) is undetermined.
pub fn aggregate_plausibility(records: &[AnnotationRecord]) -> Result<PlausibilityVerdict> {
    let key = validate_item(records, Task::RebuttalPlausibility)?.clone();
    let mut step1_mentioned = 0usize;
    let mut plausible = 0usize;
    let mut not_plausible = 0usize;
    for r in records {
        match r.answer {
            Answer::Plausibility(PlausibilityLabel::MentionedAndPlausible) => {
                step1_mentioned += 1;
                plausible += 1;
            }
            Answer::Plausibility(PlausibilityLabel::MentionedNotPlausible) => {
                step1_mentioned += 1;
                not_plausible += 1;
            }
            Answer::Plausibility(PlausibilityLabel::NotMentioned) => {}
            other => {
                return Err(Error::InvalidInput(format!(
                    "answer `{other}` is not a rebuttal-plausibility label"
                )))
            }
        }
    }
    let call = if plausible > not_plausible {
        PlausibilityCall::Yes
    } else if not_plausible > plausible {
        PlausibilityCall::No
    } else {
        PlausibilityCall::Undetermined
    };
    Ok(PlausibilityVerdict {
        claim_id: key.claim_id,
        speech_id: key.target_id,
        plausible: call,
        step1_mentioned_votes: step1_mentioned,
        step2_plausible_votes: plausible,
        step2_not_plausible_votes: not_plausible,
    })
}

/// All gold verdicts produced from one annotation file.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerdictSet {
    pub relevance: Vec<RelevanceVerdict>,
    pub mentions: Vec<MentionVerdict>,
    pub sentence_mentions: Vec<SentenceMentionVerdict>,
    pub plausibility: Vec<PlausibilityVerdict>,
}

/// Knobs for [`aggregate_all`].
#[derive(Debug, Clone)]
pub struct AggregateOptions {
    pub filter: AnnotatorFilterCriteria,
    /// Quality filtering applies to the sentence-mention task.
    pub filter_sentence_task: bool,
    /// Iterate the filter to a fixpoint instead of the single-pass default.
    pub fixpoint_filter: bool,
    pub sentence_min_answers: usize,
}

impl Default for AggregateOptions {
    fn default() -> Self {
        AggregateOptions {
            filter: AnnotatorFilterCriteria::default(),
            filter_sentence_task: true,
            fixpoint_filter: false,
            sentence_min_answers: 5,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AggregateOutcome {
    pub verdicts: VerdictSet,
    /// Annotators removed by quality control on the sentence task.
    pub removed_annotators: Vec<String>,
    /// Sentence-task records surviving the filter; agreement on that task
    /// is reported over these.
    pub sentence_records_kept: Vec<AnnotationRecord>,
}

/// Group records of one task by item key, dropping known-answer probes.
pub fn group_by_item(
    records: &[AnnotationRecord],
    task: Task,
) -> BTreeMap<ItemKey, Vec<AnnotationRecord>> {
    let mut groups: BTreeMap<ItemKey, Vec<AnnotationRecord>> = BTreeMap::new();
    for r in records {
        if r.task == task && !r.is_probe {
            groups
                .entry(r.item_key.clone())
                .or_default()
                .push(r.clone());
        }
    }
    groups
}

/// Aggregate a whole record set into per-task verdicts, applying annotator
/// quality control to the sentence-mention task. Items are processed in
/// sorted key order, so the output is deterministic.
pub fn aggregate_all(
    records: &[AnnotationRecord],
    opts: &AggregateOptions,
) -> Result<AggregateOutcome> {
    let mut outcome = AggregateOutcome::default();

    for (_, group) in group_by_item(records, Task::Relevance) {
        outcome
            .verdicts
            .relevance
            .push(aggregate_relevance(&group)?);
    }
    for (_, group) in group_by_item(records, Task::SpeechMention) {
        outcome.verdicts.mentions.push(aggregate_mention(&group)?);
    }

    let sentence_records: Vec<AnnotationRecord> = records
        .iter()
        .filter(|r| r.task == Task::SentenceMention)
        .cloned()
        .collect();
    let sentence_kept = if opts.filter_sentence_task && !sentence_records.is_empty() {
        let outcome_filter = if opts.fixpoint_filter {
            filter_annotators_fixpoint(&sentence_records, &opts.filter)
        } else {
            filter_annotators(&sentence_records, &opts.filter)
        };
        outcome.removed_annotators = outcome_filter.removed;
        outcome_filter.kept
    } else {
        sentence_records
    };
    for (_, group) in group_by_item(&sentence_kept, Task::SentenceMention) {
        outcome
            .verdicts
            .sentence_mentions
            .push(aggregate_sentence_mention(
                &group,
                opts.sentence_min_answers,
            )?);
    }
    outcome.sentence_records_kept = sentence_kept;

    for (_, group) in group_by_item(records, Task::RebuttalPlausibility) {
        outcome
            .verdicts
            .plausibility
            .push(aggregate_plausibility(&group)?);
    }
    Ok(outcome)
}

/// Prior of a claim: mentioned speeches over labeled speeches. Claims with
/// no labeled speech are absent from the map.
pub fn compute_priors(verdicts: &[MentionVerdict]) -> BTreeMap<String, f64> {
    let mut labeled: BTreeMap<String, usize> = BTreeMap::new();
    let mut mentioned: BTreeMap<String, usize> = BTreeMap::new();
    for v in verdicts {
        *labeled.entry(v.claim_id.clone()).or_default() += 1;
        if v.mentioned() {
            *mentioned.entry(v.claim_id.clone()).or_default() += 1;
        }
    }
    labeled
        .into_iter()
        .map(|(claim, n)| {
            let m = mentioned.get(&claim).copied().unwrap_or(0);
            (claim, m as f64 / n as f64)
        })
        .collect()
}

/// Like [`compute_priors`] but counting only explicit mentions.
pub fn compute_explicit_priors(verdicts: &[MentionVerdict]) -> BTreeMap<String, f64> {
    let mut labeled: BTreeMap<String, usize> = BTreeMap::new();
    let mut explicit: BTreeMap<String, usize> = BTreeMap::new();
    for v in verdicts {
        *labeled.entry(v.claim_id.clone()).or_default() += 1;
        if v.label == SpeechMentionLabel::Explicit {
            *explicit.entry(v.claim_id.clone()).or_default() += 1;
        }
    }
    labeled
        .into_iter()
        .map(|(claim, n)| {
            let e = explicit.get(&claim).copied().unwrap_or(0);
            (claim, e as f64 / n as f64)
        })
        .collect()
}

/// (claim, speech) pairs whose gold verdict is an explicit mention.
pub fn explicit_pairs(verdicts: &[MentionVerdict]) -> BTreeSet<(String, String)> {
    verdicts
        .iter()
        .filter(|v| v.label == SpeechMentionLabel::Explicit)
        .map(|v| (v.claim_id.clone(), v.speech_id.clone()))
        .collect()
}

/// Every labeled (claim, speech) pair, regardless of verdict.
pub fn labeled_pairs(verdicts: &[MentionVerdict]) -> BTreeSet<(String, String)> {
    verdicts
        .iter()
        .map(|v| (v.claim_id.clone(), v.speech_id.clone()))
        .collect()
}

/// One claim-sentence candidate selected by embedding similarity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidatePair {
    pub claim_id: String,
    pub speech_id: String,
    pub sentence_index: usize,
    pub similarity: f64,
}

impl CandidatePair {
    pub fn sentence_key(&self) -> String {
        sentence_key(&self.speech_id, self.sentence_index)
    }
}

/// Pair each claim with the sentences of its allowed speeches whose cosine
/// similarity reaches `threshold`. `allowed` restricts which (claim, speech)
/// combinations are searched (e.g. pairs with an explicit gold mention).
pub fn select_candidate_pairs(
    claim_texts: &BTreeMap<String, String>,
    speeches: &[Speech],
    allowed: &BTreeSet<(String, String)>,
    embedder: &TextEmbedder,
    threshold: f64,
) -> Result<Vec<CandidatePair>> {
    if !threshold.is_finite() {
        return Err(Error::OutOfRange {
            what: "similarity threshold".into(),
            range: "finite values".into(),
            value: threshold,
        });
    }
    let mut sentence_vectors: BTreeMap<&str, Vec<Vec<f64>>> = BTreeMap::new();
    let wanted_speeches: HashSet<&str> = allowed.iter().map(|(_, s)| s.as_str()).collect();
    for speech in speeches {
        if wanted_speeches.contains(speech.speech_id.as_str()) {
            sentence_vectors.insert(
                speech.speech_id.as_str(),
                speech.sentences.iter().map(|s| embedder.embed(s)).collect(),
            );
        }
    }
    let mut pairs = Vec::new();
    for (claim_id, claim_text) in claim_texts {
        let claim_vec = embedder.embed(claim_text);
        for speech in speeches {
            if !allowed.contains(&(claim_id.clone(), speech.speech_id.clone())) {
                continue;
            }
            let vectors = &sentence_vectors[speech.speech_id.as_str()];
            for (idx, sv) in vectors.iter().enumerate() {
                let sim = crate::scoring::cosine(&claim_vec, sv)?;
                if sim >= threshold {
                    pairs.push(CandidatePair {
                        claim_id: claim_id.clone(),
                        speech_id: speech.speech_id.clone(),
                        sentence_index: idx,
                        similarity: sim,
                    });
                }
            }
        }
    }
    Ok(pairs)
}

/// Table-style summary row: items annotated vs. items with a positive gold
/// label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub task: String,
    pub annotated: usize,
    pub positive: usize,
}

/// Summarize verdict counts per task. When claim-source sets are supplied,
/// sentence-level rows are split by the claims' origin.
pub fn annotation_summary(
    verdicts: &VerdictSet,
    gpr_claims: Option<&HashSet<String>>,
    idebate_claims: Option<&HashSet<String>>,
) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    if !verdicts.relevance.is_empty() {
        rows.push(SummaryRow {
            task: "motion_claim".into(),
            annotated: verdicts.relevance.len(),
            positive: verdicts.relevance.iter().filter(|v| v.relevant).count(),
        });
    }
    if !verdicts.mentions.is_empty() {
        rows.push(SummaryRow {
            task: "speech_claim".into(),
            annotated: verdicts.mentions.len(),
            positive: verdicts.mentions.iter().filter(|v| v.mentioned()).count(),
        });
    }
    if !verdicts.sentence_mentions.is_empty() {
        let is_mentioned = |v: &SentenceMentionVerdict| v.label == SentenceVerdictLabel::Mentioned;
        match (gpr_claims, idebate_claims) {
            (Some(gpr), idebate) => {
                let (gpr_items, other_items): (Vec<_>, Vec<_>) = verdicts
                    .sentence_mentions
                    .iter()
                    .partition(|v| gpr.contains(&v.claim_id));
                rows.push(SummaryRow {
                    task: "sentence_gpr_claim".into(),
                    annotated: gpr_items.len(),
                    positive: gpr_items.iter().filter(|v| is_mentioned(v)).count(),
                });
                let idebate_items: Vec<_> = match idebate {
                    Some(ide) => other_items
                        .into_iter()
                        .filter(|v| ide.contains(&v.claim_id))
                        .collect(),
                    None => other_items,
                };
                if !idebate_items.is_empty() {
                    rows.push(SummaryRow {
                        task: "sentence_idebate_claim".into(),
                        annotated: idebate_items.len(),
                        positive: idebate_items.iter().filter(|v| is_mentioned(v)).count(),
                    });
                }
            }
            (None, _) => rows.push(SummaryRow {
                task: "sentence_claim".into(),
                annotated: verdicts.sentence_mentions.len(),
                positive: verdicts
                    .sentence_mentions
                    .iter()
                    .filter(|v| is_mentioned(v))
                    .count(),
            }),
        }
    }
    if !verdicts.plausibility.is_empty() {
        rows.push(SummaryRow {
            task: "rebuttal_speech".into(),
            annotated: verdicts.plausibility.len(),
            positive: verdicts
                .plausibility
                .iter()
                .filter(|v| v.plausible == PlausibilityCall::Yes)
                .count(),
        });
    }
    rows
}

/// Write relevance verdicts as CSV.
pub fn write_relevance_csv<W: std::io::Write>(verdicts: &[RelevanceVerdict], w: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let io_err = |e: csv::Error| Error::InvalidInput(e.to_string());
    writer
        .write_record([
            "claim_id",
            "motion_id",
            "relevant",
            "stance",
            "support_votes",
            "oppose_votes",
            "not_relevant_votes",
        ])
        .map_err(io_err)?;
    for v in verdicts {
        writer
            .write_record([
                v.claim_id.as_str(),
                v.motion_id.as_str(),
                if v.relevant { "true" } else { "false" },
                &v.stance.to_string(),
                &v.votes.support.to_string(),
                &v.votes.oppose.to_string(),
                &v.votes.not_relevant.to_string(),
            ])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(())
}

/// Write speech-mention verdicts as CSV.
pub fn write_mention_csv<W: std::io::Write>(verdicts: &[MentionVerdict], w: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let io_err = |e: csv::Error| Error::InvalidInput(e.to_string());
    writer
        .write_record([
            "claim_id",
            "speech_id",
            "label",
            "explicit_votes",
            "implicit_votes",
            "not_mentioned_votes",
        ])
        .map_err(io_err)?;
    for v in verdicts {
        let label = match v.label {
            SpeechMentionLabel::Explicit => "explicit",
            SpeechMentionLabel::Implicit => "implicit",
            SpeechMentionLabel::NotMentioned => "not_mentioned",
        };
        writer
            .write_record([
                v.claim_id.as_str(),
                v.speech_id.as_str(),
                label,
                &v.votes.explicit.to_string(),
                &v.votes.implicit.to_string(),
                &v.votes.not_mentioned.to_string(),
            ])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(())
}

/// Write sentence-mention verdicts as CSV.
pub fn write_sentence_csv<W: std::io::Write>(
    verdicts: &[SentenceMentionVerdict],
    w: W,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let io_err = |e: csv::Error| Error::InvalidInput(e.to_string());
    writer
        .write_record([
            "claim_id",
            "sentence_key",
            "label",
            "mentioned_votes",
            "not_mentioned_votes",
            "answers_after_filtering",
        ])
        .map_err(io_err)?;
    for v in verdicts {
        writer
            .write_record([
                v.claim_id.as_str(),
                v.sentence_key.as_str(),
                &v.label.to_string(),
                &v.mentioned_votes.to_string(),
                &v.not_mentioned_votes.to_string(),
                &v.answers_after_filtering.to_string(),
            ])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(())
}

/// Write rebuttal-plausibility verdicts as CSV.
pub fn write_plausibility_csv<W: std::io::Write>(
    verdicts: &[PlausibilityVerdict],
    w: W,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let io_err = |e: csv::Error| Error::InvalidInput(e.to_string());
    writer
        .write_record([
            "claim_id",
            "speech_id",
            "plausible",
            "step1_mentioned_votes",
            "step2_plausible_votes",
            "step2_not_plausible_votes",
        ])
        .map_err(io_err)?;
    for v in verdicts {
        writer
            .write_record([
                v.claim_id.as_str(),
                v.speech_id.as_str(),
                &v.plausible.to_string(),
                &v.step1_mentioned_votes.to_string(),
                &v.step2_plausible_votes.to_string(),
                &v.step2_not_plausible_votes.to_string(),
            ])
            .map_err(io_err)?;
    }
    writer
        .flush()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(())
}
