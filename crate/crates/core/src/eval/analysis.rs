//! Coverage and concentration analyses plus tabular data behind the
//! figures: claims vs. relevant motions, the prior histogram, and
//! precision-recall overlays.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::annotation::{
    compute_explicit_priors, compute_priors, MentionVerdict, RelevanceVerdict,
};
use crate::error::{Error, Result};

use super::{LabeledPrediction, PrCurve};

/// How well the claim set covers the speeches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    /// Percentage of speeches with at least one mentioned claim, 0..100.
    pub coverage_pct: f64,
    pub avg_mentions_per_speech: f64,
    /// Mean number of candidate claims per speech.
    pub avg_potential_per_speech: f64,
    pub speech_count: usize,
}

/// Coverage over `speech_ids`; `candidate_counts` gives the number of
/// candidate claims per speech (absent speeches count zero).
pub fn coverage_report(
    speech_ids: &[String],
    verdicts: &[MentionVerdict],
    candidate_counts: &BTreeMap<String, usize>,
) -> CoverageReport {
    let mut mentions: BTreeMap<&str, usize> = BTreeMap::new();
    for v in verdicts {
        if v.mentioned() {
            *mentions.entry(v.speech_id.as_str()).or_default() += 1;
        }
    }
    let n = speech_ids.len();
    if n == 0 {
        return CoverageReport {
            coverage_pct: 0.0,
            avg_mentions_per_speech: 0.0,
            avg_potential_per_speech: 0.0,
            speech_count: 0,
        };
    }
    let covered = speech_ids
        .iter()
        .filter(|s| mentions.get(s.as_str()).copied().unwrap_or(0) > 0)
        .count();
    let total_mentions: usize = speech_ids
        .iter()
        .map(|s| mentions.get(s.as_str()).copied().unwrap_or(0))
        .sum();
    let total_candidates: usize = speech_ids
        .iter()
        .map(|s| candidate_counts.get(s).copied().unwrap_or(0))
        .sum();
    CoverageReport {
        coverage_pct: 100.0 * covered as f64 / n as f64,
        avg_mentions_per_speech: total_mentions as f64 / n as f64,
        avg_potential_per_speech: total_candidates as f64 / n as f64,
        speech_count: n,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimShare {
    pub claim_id: String,
    /// Fraction of the selected predictions carrying this claim.
    pub share: f64,
}

/// What the top fraction of ranked predictions contains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopFractionAnalysis {
    pub fraction: f64,
    pub selected: usize,
    pub precision: f64,
    pub recall: f64,
    /// Distinct claims among the selection as a percentage of
    /// `total_claims`, 0..100.
    pub distinct_claims_pct: f64,
    /// Per-claim share of the selection, largest first.
    pub top_claim_share: Vec<ClaimShare>,
}

/// Take the top ⌈fraction·n⌉ predictions by score (claim id, then speech
/// id, break ties) and report precision, recall and claim concentration.
pub fn top_fraction_analysis(
    predictions: &[LabeledPrediction],
    fraction: f64,
    total_claims: usize,
) -> Result<TopFractionAnalysis> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::OutOfRange {
            what: "fraction".into(),
            range: "(0, 1]".into(),
            value: fraction,
        });
    }
    if predictions.is_empty() {
        return Err(Error::InvalidInput("no predictions to analyze".into()));
    }
    let mut order: Vec<&LabeledPrediction> = predictions.iter().collect();
    order.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.claim_id.cmp(&b.claim_id))
            .then_with(|| a.speech_id.cmp(&b.speech_id))
    });
    let k = ((fraction * order.len() as f64).ceil() as usize).clamp(1, order.len());
    let selected = &order[..k];
    let positives_total = predictions.iter().filter(|p| p.gold).count();
    let positives_selected = selected.iter().filter(|p| p.gold).count();
    let mut per_claim: BTreeMap<&str, usize> = BTreeMap::new();
    for p in selected {
        *per_claim.entry(p.claim_id.as_str()).or_default() += 1;
    }
    let mut shares: Vec<ClaimShare> = per_claim
        .iter()
        .map(|(claim, count)| ClaimShare {
            claim_id: claim.to_string(),
            share: *count as f64 / k as f64,
        })
        .collect();
    shares.sort_by(|a, b| {
        b.share
            .total_cmp(&a.share)
            .then_with(|| a.claim_id.cmp(&b.claim_id))
    });
    Ok(TopFractionAnalysis {
        fraction,
        selected: k,
        precision: positives_selected as f64 / k as f64,
        recall: if positives_total > 0 {
            positives_selected as f64 / positives_total as f64
        } else {
            0.0
        },
        distinct_claims_pct: if total_claims > 0 {
            100.0 * per_claim.len() as f64 / total_claims as f64
        } else {
            0.0
        },
        top_claim_share: shares,
    })
}

/// Number of motions each claim was found relevant to.
pub fn relevant_motion_counts(verdicts: &[RelevanceVerdict]) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for v in verdicts {
        counts.entry(v.claim_id.clone()).or_default();
        if v.relevant && seen.insert((v.claim_id.clone(), v.motion_id.clone())) {
            *counts.get_mut(&v.claim_id).unwrap() += 1;
        }
    }
    counts
}

/// Plot-ready rows with named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl FigureTable {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        let io_err = |e: csv::Error| Error::InvalidInput(e.to_string());
        writer.write_record(&self.columns).map_err(io_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(io_err)?;
        }
        writer
            .flush()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(())
    }
}

/// The supported figure kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    ClaimsVsRelevantMotions,
    PriorHistogram,
    PrOverlay,
}

impl std::str::FromStr for FigureKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "claims_vs_relevant_motions" => Ok(FigureKind::ClaimsVsRelevantMotions),
            "prior_histogram" => Ok(FigureKind::PriorHistogram),
            "pr_overlay" => Ok(FigureKind::PrOverlay),
            other => Err(format!(
                "unknown figure kind `{other}` (claims_vs_relevant_motions, prior_histogram, pr_overlay)"
            )),
        }
    }
}

/// Histogram of claims vs. the number of motions annotated as relevant.
pub fn figure_claims_vs_relevant_motions(verdicts: &[RelevanceVerdict]) -> FigureTable {
    let counts = relevant_motion_counts(verdicts);
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for count in counts.values() {
        *histogram.entry(*count).or_default() += 1;
    }
    FigureTable {
        columns: vec!["relevant_motions".into(), "claim_count".into()],
        rows: histogram
            .into_iter()
            .map(|(bucket, n)| vec![bucket.to_string(), n.to_string()])
            .collect(),
    }
}

fn prior_bucket(prior: f64) -> String {
    if prior == 0.0 {
        return "0".to_string();
    }
    let mut decile = (prior * 10.0).ceil() as usize;
    if decile == 0 {
        decile = 1;
    }
    decile = decile.min(10);
    format!(
        "({:.1},{:.1}]",
        (decile - 1) as f64 / 10.0,
        decile as f64 / 10.0
    )
}

fn bucket_order() -> Vec<String> {
    let mut order = vec!["0".to_string()];
    for d in 1..=10usize {
        order.push(format!(
            "({:.1},{:.1}]",
            (d - 1) as f64 / 10.0,
            d as f64 / 10.0
        ));
    }
    order
}

/// Distribution of claims vs. speech prior, as separate series for
/// any-mention and explicit-only priors. Empty buckets are emitted so the
/// histogram replots faithfully.
pub fn figure_prior_histogram(verdicts: &[MentionVerdict]) -> FigureTable {
    let series = [
        ("any", compute_priors(verdicts)),
        ("explicit", compute_explicit_priors(verdicts)),
    ];
    let order = bucket_order();
    let mut rows = Vec::new();
    for (name, priors) in series {
        let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
        for prior in priors.values() {
            *histogram.entry(prior_bucket(*prior)).or_default() += 1;
        }
        for bucket in &order {
            let count = histogram.get(bucket).copied().unwrap_or(0);
            rows.push(vec![name.to_string(), bucket.clone(), count.to_string()]);
        }
    }
    FigureTable {
        columns: vec!["series".into(), "prior_bucket".into(), "claim_count".into()],
        rows,
    }
}

/// Several named precision-recall curves in one table.
pub fn figure_pr_overlay(curves: &[(String, PrCurve)]) -> FigureTable {
    let mut rows = Vec::new();
    for (name, curve) in curves {
        for point in &curve.points {
            rows.push(vec![
                name.clone(),
                format!("{}", point.threshold),
                format!("{}", point.precision),
                format!("{}", point.recall),
            ]);
        }
    }
    FigureTable {
        columns: vec![
            "series".into(),
            "threshold".into(),
            "precision".into(),
            "recall".into(),
        ],
        rows,
    }
}
