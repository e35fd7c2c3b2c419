//! Motion-level evaluation protocols: seeded train/test splits and
//! leave-one-motion-out cross-validation. Speeches always follow their
//! motion, so no motion straddles a split.

use std::collections::BTreeMap;

use crate::annotation::MentionVerdict;
use crate::corpus::Speech;
use crate::error::{Error, Result};
use crate::scoring::{Scorer, ScorerFactory, ScorerInputs};

use super::LabeledPrediction;

/// splitmix64: tiny, seedable, platform-stable. Splits must not depend on
/// an external RNG's version-to-version stream.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

fn shuffled(mut items: Vec<String>, seed: u64) -> Vec<String> {
    let mut rng = SplitMix64(seed);
    for i in (1..items.len()).rev() {
        let j = (rng.next() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
    items
}

/// Deterministic motion split: `test_fraction` of the motions (rounded, at
/// least one on each side) become the test set. Input order does not
/// matter; the same seed always yields the same split.
pub fn split_by_motion(
    motion_ids: &[String],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<String>, Vec<String>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::OutOfRange {
            what: "test fraction".into(),
            range: "(0, 1)".into(),
            value: test_fraction,
        });
    }
    let mut ids: Vec<String> = motion_ids.to_vec();
    ids.sort();
    ids.dedup();
    let n = ids.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "need at least two motions to split".into(),
        ));
    }
    let k = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let shuffled_ids = shuffled(ids, seed);
    let mut test: Vec<String> = shuffled_ids[..k].to_vec();
    let mut train: Vec<String> = shuffled_ids[k..].to_vec();
    test.sort();
    train.sort();
    Ok((train, test))
}

fn speech_index(speeches: &[Speech]) -> BTreeMap<&str, &Speech> {
    speeches.iter().map(|s| (s.speech_id.as_str(), s)).collect()
}

/// Score every (claim, speech) pair that carries a gold mention verdict.
/// Output is ordered by speech id then claim id.
pub fn predictions_with_scorer(
    speeches: &[Speech],
    verdicts: &[MentionVerdict],
    scorer: &dyn Scorer,
) -> Result<Vec<LabeledPrediction>> {
    let index = speech_index(speeches);
    let mut by_speech: BTreeMap<&str, Vec<&MentionVerdict>> = BTreeMap::new();
    for v in verdicts {
        if !index.contains_key(v.speech_id.as_str()) {
            return Err(Error::InvalidInput(format!(
                "mention verdict references unknown speech `{}`",
                v.speech_id
            )));
        }
        by_speech.entry(v.speech_id.as_str()).or_default().push(v);
    }
    let mut predictions = Vec::new();
    for (speech_id, mut group) in by_speech {
        group.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
        let speech = index[speech_id];
        let claim_ids: Vec<String> = group.iter().map(|v| v.claim_id.clone()).collect();
        let scored = scorer.score_many(&claim_ids, speech);
        for (verdict, pair) in group.iter().zip(scored) {
            predictions.push(LabeledPrediction {
                claim_id: verdict.claim_id.clone(),
                speech_id: verdict.speech_id.clone(),
                score: pair.score,
                gold: verdict.mentioned(),
            });
        }
    }
    Ok(predictions)
}

/// For each motion, build a scorer from every other motion's verdicts and
/// apply it to that motion's speeches; concatenate the fold predictions in
/// motion order.
pub fn leave_one_motion_out(
    speeches: &[Speech],
    verdicts: &[MentionVerdict],
    factory: &dyn ScorerFactory,
    inputs: &ScorerInputs,
) -> Result<Vec<LabeledPrediction>> {
    let index = speech_index(speeches);
    let motion_of = |speech_id: &str| -> Result<&str> {
        index
            .get(speech_id)
            .map(|s| s.motion_id.as_str())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "mention verdict references unknown speech `{speech_id}`"
                ))
            })
    };
    let mut motions: Vec<&str> = Vec::new();
    for v in verdicts {
        motions.push(motion_of(&v.speech_id)?);
    }
    motions.sort();
    motions.dedup();
    if motions.len() < 2 {
        return Err(Error::InvalidInput(
            "leave-one-motion-out needs verdicts for at least two motions".into(),
        ));
    }

    let mut predictions = Vec::new();
    for held_out in motions {
        let mut train: Vec<MentionVerdict> = Vec::new();
        let mut fold: Vec<MentionVerdict> = Vec::new();
        for v in verdicts {
            if motion_of(&v.speech_id)? == held_out {
                fold.push(v.clone());
            } else {
                train.push(v.clone());
            }
        }
        let scorer = factory.build(inputs, &train)?;
        predictions.extend(predictions_with_scorer(speeches, &fold, scorer.as_ref())?);
    }
    Ok(predictions)
}
