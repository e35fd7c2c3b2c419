//! Annotator quality control: drop annotators who answered too few
//! questions, overlap with too few peers, or agree too little with them.
//!
//! The default is a single pass: every criterion is evaluated against the
//! unfiltered record set and violators are removed simultaneously. A
//! fixpoint mode re-runs the pass on the surviving records until stable.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{AnnotationRecord, Answer, ItemKey};

use super::agreement::kappa_with_flag;

/// Thresholds an annotator must meet to be kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotatorFilterCriteria {
    /// Minimum questions answered.
    pub min_questions: usize,
    /// Minimum common answers required for a peer to count.
    pub min_common_answers: usize,
    /// Minimum number of peers with that much overlap.
    pub min_peers: usize,
    /// Minimum mean kappa with those peers.
    pub min_avg_agreement: f64,
}

impl Default for AnnotatorFilterCriteria {
    fn default() -> Self {
        AnnotatorFilterCriteria {
            min_questions: 10,
            min_common_answers: 5,
            min_peers: 3,
            min_avg_agreement: 0.2,
        }
    }
}

/// Surviving records and the annotators that were removed.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub kept: Vec<AnnotationRecord>,
    pub removed: Vec<String>,
}

type Identity = (ItemKey, bool);

fn answer_maps(records: &[AnnotationRecord]) -> BTreeMap<String, BTreeMap<Identity, Answer>> {
    let mut map: BTreeMap<String, BTreeMap<Identity, Answer>> = BTreeMap::new();
    for r in records {
        map.entry(r.annotator_id.clone())
            .or_default()
            .entry((r.item_key.clone(), r.is_probe))
            .or_insert(r.answer);
    }
    map
}

fn kept_annotators(
    records: &[AnnotationRecord],
    criteria: &AnnotatorFilterCriteria,
) -> Vec<String> {
    let by_annotator = answer_maps(records);
    let names: Vec<&String> = by_annotator.keys().collect();
    let mut kept = Vec::new();
    for name in &names {
        let own = &by_annotator[*name];
        if own.len() < criteria.min_questions {
            continue;
        }
        // Agreement is measured against peers with enough shared answers.
        let mut qualified_peers = 0usize;
        let mut peer_kappas = Vec::new();
        for peer in &names {
            if peer == name {
                continue;
            }
            let other = &by_annotator[*peer];
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (identity, answer) in own {
                if let Some(theirs) = other.get(identity) {
                    left.push(*answer);
                    right.push(*theirs);
                }
            }
            if left.len() >= criteria.min_common_answers {
                qualified_peers += 1;
                let (kappa, _) =
                    kappa_with_flag(&left, &right).expect("aligned, non-empty label lists");
                peer_kappas.push(kappa);
            }
        }
        if qualified_peers < criteria.min_peers {
            continue;
        }
        let avg = peer_kappas.iter().sum::<f64>() / peer_kappas.len() as f64;
        if avg < criteria.min_avg_agreement {
            continue;
        }
        kept.push((*name).clone());
    }
    kept
}

/// Single-pass filter: criteria are checked against the original record
/// set, then all violators removed at once.
pub fn filter_annotators(
    records: &[AnnotationRecord],
    criteria: &AnnotatorFilterCriteria,
) -> FilterOutcome {
    let kept_set = kept_annotators(records, criteria);
    let removed: Vec<String> = answer_maps(records)
        .into_keys()
        .filter(|a| !kept_set.contains(a))
        .collect();
    let kept = records
        .iter()
        .filter(|r| kept_set.contains(&r.annotator_id))
        .cloned()
        .collect();
    FilterOutcome { kept, removed }
}

/// Iterated filter: re-evaluates the criteria on the surviving records
/// until no further annotator drops out.
pub fn filter_annotators_fixpoint(
    records: &[AnnotationRecord],
    criteria: &AnnotatorFilterCriteria,
) -> FilterOutcome {
    let mut current: Vec<AnnotationRecord> = records.to_vec();
    let mut removed_all = Vec::new();
    loop {
        let outcome = filter_annotators(&current, criteria);
        let shrunk = outcome.kept.len() < current.len();
        removed_all.extend(outcome.removed);
        current = outcome.kept;
        if !shrunk {
            break;
        }
    }
    removed_all.sort();
    removed_all.dedup();
    FilterOutcome {
        kept: current,
        removed: removed_all,
    }
}
