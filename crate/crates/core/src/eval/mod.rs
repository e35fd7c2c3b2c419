//! Evaluation of ranked claim-mention predictions: precision-recall curves,
//! break-even points, motion-level protocols and figure data.

mod analysis;
mod protocol;

pub use analysis::{
    coverage_report, figure_claims_vs_relevant_motions, figure_pr_overlay, figure_prior_histogram,
    relevant_motion_counts, top_fraction_analysis, ClaimShare, CoverageReport, FigureKind,
    FigureTable, TopFractionAnalysis,
};
pub use protocol::{leave_one_motion_out, predictions_with_scorer, split_by_motion};

use serde::Serialize;

use crate::error::{Error, Result};

/// One scored (claim, speech) pair with its gold mention label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledPrediction {
    pub claim_id: String,
    pub speech_id: String,
    pub score: f64,
    pub gold: bool,
}

/// One point of a precision-recall curve; predictions scoring at least
/// `threshold` count as positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
    pub positive_count: usize,
}

/// Compute the curve at every distinct threshold, highest first. Tied
/// scores form a single point, so intra-tie ordering cannot flatter the
/// curve. Errors when no prediction carries a positive gold label.
pub fn pr_curve(predictions: &[LabeledPrediction]) -> Result<PrCurve> {
    if predictions.is_empty() {
        return Err(Error::InvalidInput("no predictions to evaluate".into()));
    }
    if let Some(bad) = predictions.iter().find(|p| !p.score.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "non-finite score for ({}, {})",
            bad.claim_id, bad.speech_id
        )));
    }
    let positive_count = predictions.iter().filter(|p| p.gold).count();
    if positive_count == 0 {
        return Err(Error::NoPositives);
    }
    let mut order: Vec<&LabeledPrediction> = predictions.iter().collect();
    order.sort_by(|a, b| b.score.total_cmp(&a.score));

    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0usize;
    while i < order.len() {
        let threshold = order[i].score;
        while i < order.len() && order[i].score == threshold {
            if order[i].gold {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(PrPoint {
            threshold,
            precision: tp as f64 / (tp + fp) as f64,
            recall: tp as f64 / positive_count as f64,
        });
    }
    Ok(PrCurve {
        points,
        positive_count,
    })
}

/// The point where precision meets recall; F1 there equals the common
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakevenResult {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// The crossing fell between curve points and was linearly
    /// interpolated.
    pub interpolated: bool,
}

/// Find the curve point minimizing |precision − recall| (lowest threshold
/// on ties). When the curve crosses between adjacent points, the crossing
/// is interpolated linearly and wins with a difference of zero.
pub fn breakeven(curve: &PrCurve) -> Result<BreakevenResult> {
    if curve.points.is_empty() {
        return Err(Error::EmptyCurve);
    }
    struct Candidate {
        diff: f64,
        threshold: f64,
        precision: f64,
        recall: f64,
        interpolated: bool,
    }
    let mut candidates: Vec<Candidate> = curve
        .points
        .iter()
        .map(|p| Candidate {
            diff: (p.precision - p.recall).abs(),
            threshold: p.threshold,
            precision: p.precision,
            recall: p.recall,
            interpolated: false,
        })
        .collect();
    for pair in curve.points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let d1 = a.precision - a.recall;
        let d2 = b.precision - b.recall;
        if d1 * d2 < 0.0 {
            let t = d1 / (d1 - d2);
            let precision = a.precision + t * (b.precision - a.precision);
            let recall = a.recall + t * (b.recall - a.recall);
            candidates.push(Candidate {
                diff: 0.0,
                threshold: a.threshold + t * (b.threshold - a.threshold),
                precision,
                recall,
                interpolated: true,
            });
        }
    }
    let best = candidates
        .into_iter()
        .min_by(|x, y| {
            x.diff
                .total_cmp(&y.diff)
                .then_with(|| x.threshold.total_cmp(&y.threshold))
        })
        .expect("non-empty candidate list");
    let f1 = if best.precision + best.recall > 0.0 {
        2.0 * best.precision * best.recall / (best.precision + best.recall)
    } else {
        0.0
    };
    Ok(BreakevenResult {
        threshold: best.threshold,
        precision: best.precision,
        recall: best.recall,
        f1,
        interpolated: best.interpolated,
    })
}

#[cfg(test)]
mod tests;
