//! Cohen's kappa and agreement reports over annotator pairs.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::corpus::{AnnotationRecord, Answer, ItemKey, Task};
use crate::error::{Error, Result};

/// κ = (p_o − p_e) / (1 − p_e). When chance agreement p_e is 1 the formula
/// degenerates; by convention the result is 1 on perfect agreement and 0
/// otherwise. Returns (kappa, degenerate).
pub(crate) fn kappa_with_flag<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<(f64, bool)> {
    if a.len() != b.len() {
        return Err(Error::LabelLengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyLabels);
    }
    let n = a.len() as f64;
    let mut agree = 0usize;
    let mut count_a: HashMap<&T, usize> = HashMap::new();
    let mut count_b: HashMap<&T, usize> = HashMap::new();
    for (x, y) in a.iter().zip(b.iter()) {
        if x == y {
            agree += 1;
        }
        *count_a.entry(x).or_default() += 1;
        *count_b.entry(y).or_default() += 1;
    }
    let p_o = agree as f64 / n;
    let mut p_e = 0.0;
    for (label, ca) in &count_a {
        if let Some(cb) = count_b.get(*label) {
            p_e += (*ca as f64 / n) * (*cb as f64 / n);
        }
    }
    if p_e >= 1.0 {
        let kappa = if p_o >= 1.0 { 1.0 } else { 0.0 };
        return Ok((kappa, true));
    }
    Ok(((p_o - p_e) / (1.0 - p_e), false))
}

/// Cohen's kappa between two aligned label lists.
pub fn cohen_kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64> {
    kappa_with_flag(a, b).map(|(k, _)| k)
}

/// Agreement of one annotator pair on their common items.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairAgreement {
    pub annotator_a: String,
    pub annotator_b: String,
    pub kappa: f64,
    pub common_items: usize,
    /// Chance agreement was 1; the documented convention applied.
    pub degenerate: bool,
}

/// Pairwise agreement over a record set. Pairs without common items are
/// excluded from the mean rather than counted as zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AgreementReport {
    pub pairwise_mean_kappa: Option<f64>,
    pub per_pair: Vec<PairAgreement>,
    /// Mean kappa after applying the label collapse, when one was given.
    pub collapsed_mean_kappa: Option<f64>,
    pub vs_majority_mean_kappa: Option<f64>,
}

/// Item identity for alignment: probe copies of an item are distinct
/// questions.
type Identity = (ItemKey, bool);

fn answers_by_annotator(
    records: &[AnnotationRecord],
) -> BTreeMap<String, BTreeMap<Identity, Answer>> {
    let mut map: BTreeMap<String, BTreeMap<Identity, Answer>> = BTreeMap::new();
    for r in records {
        map.entry(r.annotator_id.clone())
            .or_default()
            .entry((r.item_key.clone(), r.is_probe))
            .or_insert(r.answer);
    }
    map
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Compute kappa for every annotator pair on their common items, with an
/// optional collapsed-label view (e.g. the binary relevant/irrelevant or
/// mentioned/not collapse).
pub fn pairwise_agreement(
    records: &[AnnotationRecord],
    collapse: Option<&dyn Fn(&Answer) -> &'static str>,
) -> AgreementReport {
    let by_annotator = answers_by_annotator(records);
    let annotators: Vec<&String> = by_annotator.keys().collect();
    let mut per_pair = Vec::new();
    let mut raw_kappas = Vec::new();
    let mut collapsed_kappas = Vec::new();
    for i in 0..annotators.len() {
        for j in i + 1..annotators.len() {
            let a = &by_annotator[annotators[i]];
            let b = &by_annotator[annotators[j]];
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (identity, answer) in a {
                if let Some(other) = b.get(identity) {
                    left.push(*answer);
                    right.push(*other);
                }
            }
            if left.is_empty() {
                continue;
            }
            let (kappa, degenerate) =
                kappa_with_flag(&left, &right).expect("aligned, non-empty label lists");
            raw_kappas.push(kappa);
            if let Some(f) = collapse {
                let cl: Vec<&'static str> = left.iter().map(f).collect();
                let cr: Vec<&'static str> = right.iter().map(f).collect();
                let (ck, _) = kappa_with_flag(&cl, &cr).expect("aligned, non-empty label lists");
                collapsed_kappas.push(ck);
            }
            per_pair.push(PairAgreement {
                annotator_a: annotators[i].clone(),
                annotator_b: annotators[j].clone(),
                kappa,
                common_items: left.len(),
                degenerate,
            });
        }
    }
    AgreementReport {
        pairwise_mean_kappa: mean(&raw_kappas),
        per_pair,
        collapsed_mean_kappa: mean(&collapsed_kappas),
        vs_majority_mean_kappa: None,
    }
}

/// Mean kappa between each annotator (with at least `min_questions`
/// answers) and the per-item majority label. Plurality ties break to the
/// smallest label so the reference is deterministic.
pub fn vs_majority_agreement(records: &[AnnotationRecord], min_questions: usize) -> Option<f64> {
    let mut per_item: BTreeMap<Identity, Vec<Answer>> = BTreeMap::new();
    for r in records {
        per_item
            .entry((r.item_key.clone(), r.is_probe))
            .or_default()
            .push(r.answer);
    }
    let majority: BTreeMap<Identity, Answer> = per_item
        .into_iter()
        .map(|(identity, answers)| {
            let mut counts: BTreeMap<Answer, usize> = BTreeMap::new();
            for a in answers {
                *counts.entry(a).or_default() += 1;
            }
            let best = counts
                .into_iter()
                .max_by(|(la, ca), (lb, cb)| ca.cmp(cb).then(lb.cmp(la)))
                .map(|(label, _)| label)
                .expect("non-empty answer list");
            (identity, best)
        })
        .collect();

    let by_annotator = answers_by_annotator(records);
    let mut kappas = Vec::new();
    for answers in by_annotator.values() {
        if answers.len() < min_questions {
            continue;
        }
        let mut own = Vec::new();
        let mut maj = Vec::new();
        for (identity, answer) in answers {
            own.push(*answer);
            maj.push(majority[identity]);
        }
        let (k, _) = kappa_with_flag(&own, &maj).expect("aligned, non-empty label lists");
        kappas.push(k);
    }
    mean(&kappas)
}

/// Binary relevance view: supporting or opposing both mean relevant.
pub fn collapse_relevance_binary(a: &Answer) -> &'static str {
    use crate::corpus::RelevanceLabel::*;
    match a {
        Answer::Relevance(Support) | Answer::Relevance(Oppose) => "relevant",
        Answer::Relevance(NotRelevant) => "not_relevant",
        other => other.as_str(),
    }
}

/// Binary mention view: explicit and implicit both mean mentioned.
pub fn collapse_mention_binary(a: &Answer) -> &'static str {
    use crate::corpus::SpeechMentionLabel::*;
    match a {
        Answer::SpeechMention(Explicit) | Answer::SpeechMention(Implicit) => "mentioned",
        Answer::SpeechMention(NotMentioned) => "not_mentioned",
        other => other.as_str(),
    }
}

/// Step-1 view of the two-step plausibility answer.
pub fn collapse_plausibility_step1(a: &Answer) -> &'static str {
    use crate::corpus::PlausibilityLabel::*;
    match a {
        Answer::Plausibility(MentionedAndPlausible)
        | Answer::Plausibility(MentionedNotPlausible) => "mentioned",
        Answer::Plausibility(NotMentioned) => "not_mentioned",
        other => other.as_str(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeAnnotatorStats {
    pub answered: usize,
    pub wrong: usize,
    pub error_rate: f64,
}

/// Error rates on known-answer probe questions.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ProbeErrorReport {
    /// Absent when no probe records exist.
    pub overall: Option<f64>,
    pub total: usize,
    pub wrong: usize,
    pub per_annotator: BTreeMap<String, ProbeAnnotatorStats>,
}

/// Whether a probe answer counts as correct. Mention-style tasks compare
/// the mentioned/not collapse, so explicit vs. implicit is not an error.
fn probe_matches(task: Task, answer: &Answer, gold: &Answer) -> bool {
    match task {
        Task::SpeechMention => collapse_mention_binary(answer) == collapse_mention_binary(gold),
        Task::RebuttalPlausibility => {
            collapse_plausibility_step1(answer) == collapse_plausibility_step1(gold)
        }
        _ => answer == gold,
    }
}

/// Per-annotator and overall error rate on known-answer items.
pub fn probe_error_rate(records: &[AnnotationRecord]) -> Result<ProbeErrorReport> {
    let mut report = ProbeErrorReport::default();
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_probe) {
        let gold = r
            .gold_answer
            .as_ref()
            .ok_or_else(|| Error::ProbeWithoutGold {
                item: r.item_key.raw(),
                annotator: r.annotator_id.clone(),
            })?;
        let entry = counts.entry(r.annotator_id.clone()).or_default();
        entry.0 += 1;
        report.total += 1;
        if !probe_matches(r.task, &r.answer, gold) {
            entry.1 += 1;
            report.wrong += 1;
        }
    }
    if report.total > 0 {
        report.overall = Some(report.wrong as f64 / report.total as f64);
    }
    report.per_annotator = counts
        .into_iter()
        .map(|(annotator, (answered, wrong))| {
            (
                annotator,
                ProbeAnnotatorStats {
                    answered,
                    wrong,
                    error_rate: wrong as f64 / answered as f64,
                },
            )
        })
        .collect();
    Ok(report)
}
