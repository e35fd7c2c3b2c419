use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::annotation::{MentionVerdict, MentionVotes};
use crate::corpus::{SpeechMentionLabel, Stance};
use crate::scoring::{ScorerInputs, ScorerRegistry};
use crate::testutil::{speech, TestRng};

fn pred(claim: &str, speech_id: &str, score: f64, gold: bool) -> LabeledPrediction {
    LabeledPrediction {
        claim_id: claim.into(),
        speech_id: speech_id.into(),
        score,
        gold,
    }
}

// ---------------------------------------------------------------------
// precision-recall curve
// ---------------------------------------------------------------------

#[test]
fn perfect_separation_reaches_one_one() {
    let preds = vec![
        pred("c1", "s1", 0.9, true),
        pred("c2", "s1", 0.8, true),
        pred("c3", "s1", 0.3, false),
        pred("c4", "s1", 0.2, false),
    ];
    let curve = pr_curve(&preds).unwrap();
    assert!(curve
        .points
        .iter()
        .any(|p| p.precision == 1.0 && p.recall == 1.0));
    let last = curve.points.last().unwrap();
    assert_eq!(last.recall, 1.0);
}

#[test]
fn tied_scores_form_single_point() {
    let preds = vec![
        pred("c1", "s1", 0.5, true),
        pred("c2", "s1", 0.5, false),
        pred("c3", "s1", 0.5, false),
        pred("c4", "s1", 0.5, true),
    ];
    let curve = pr_curve(&preds).unwrap();
    assert_eq!(curve.points.len(), 1);
    let point = curve.points[0];
    assert_eq!(point.precision, 0.5); // base rate
    assert_eq!(point.recall, 1.0);
}

#[test]
fn zero_positives_is_undefined_recall() {
    let preds = vec![pred("c1", "s1", 0.4, false)];
    assert!(matches!(
        pr_curve(&preds).unwrap_err(),
        crate::Error::NoPositives
    ));
    assert!(pr_curve(&[]).is_err());
}

/// O(n²) oracle: recount true/false positives at every distinct threshold.
fn oracle_pr(preds: &[LabeledPrediction]) -> Vec<(f64, f64, f64)> {
    let mut thresholds: Vec<f64> = preds.iter().map(|p| p.score).collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let positives = preds.iter().filter(|p| p.gold).count();
    thresholds
        .into_iter()
        .map(|t| {
            let tp = preds.iter().filter(|p| p.score >= t && p.gold).count();
            let fp = preds.iter().filter(|p| p.score >= t && !p.gold).count();
            (
                t,
                tp as f64 / (tp + fp) as f64,
                tp as f64 / positives as f64,
            )
        })
        .collect()
}

#[test]
fn curve_matches_quadratic_recount() {
    let mut rng = TestRng(2024);
    for case in 0..50 {
        let n = 2 + rng.below(60) as usize;
        let preds: Vec<LabeledPrediction> = (0..n)
            .map(|i| {
                pred(
                    &format!("c{i}"),
                    "s1",
                    (rng.below(12) as f64) / 10.0, // deliberate ties
                    rng.below(2) == 0,
                )
            })
            .collect();
        if !preds.iter().any(|p| p.gold) {
            continue;
        }
        let curve = pr_curve(&preds).unwrap();
        let expected = oracle_pr(&preds);
        assert_eq!(curve.points.len(), expected.len(), "case {case}");
        for (point, (t, p, r)) in curve.points.iter().zip(expected) {
            assert_eq!(point.threshold, t, "case {case}");
            assert_eq!(point.precision, p, "case {case}");
            assert_eq!(point.recall, r, "case {case}");
        }
    }
}

proptest! {
    // Duplicating every prediction changes nothing.
    #[test]
    fn duplication_leaves_curve_unchanged(seed in 1u64..400) {
        let mut rng = TestRng(seed);
        let n = 2 + rng.below(30) as usize;
        let preds: Vec<LabeledPrediction> = (0..n)
            .map(|i| pred(&format!("c{i}"), "s1", (rng.below(10) as f64) / 10.0, rng.below(2) == 0))
            .collect();
        prop_assume!(preds.iter().any(|p| p.gold));
        let doubled: Vec<LabeledPrediction> =
            preds.iter().chain(preds.iter()).cloned().collect();
        let a = pr_curve(&preds).unwrap();
        let b = pr_curve(&doubled).unwrap();
        prop_assert_eq!(a.points, b.points);
    }

    // A strictly monotone transformation of scores moves thresholds but
    // neither precision nor recall.
    #[test]
    fn monotone_transform_preserves_curve(seed in 1u64..400) {
        let mut rng = TestRng(seed);
        let n = 2 + rng.below(30) as usize;
        let preds: Vec<LabeledPrediction> = (0..n)
            .map(|i| pred(&format!("c{i}"), "s1", (rng.below(10) as f64) / 10.0, rng.below(2) == 0))
            .collect();
        prop_assume!(preds.iter().any(|p| p.gold));
        let transformed: Vec<LabeledPrediction> = preds
            .iter()
            .map(|p| LabeledPrediction { score: (p.score * 3.0).exp(), ..p.clone() })
            .collect();
        let a = pr_curve(&preds).unwrap();
        let b = pr_curve(&transformed).unwrap();
        let pr_only = |c: &PrCurve| c.points.iter().map(|p| (p.precision, p.recall)).collect::<Vec<_>>();
        prop_assert_eq!(pr_only(&a), pr_only(&b));
    }
}

// ---------------------------------------------------------------------
// breakeven
// ---------------------------------------------------------------------

fn curve_from(points: &[(f64, f64, f64)]) -> PrCurve {
    PrCurve {
        points: points
            .iter()
            .map(|&(threshold, precision, recall)| PrPoint {
                threshold,
                precision,
                recall,
            })
            .collect(),
        positive_count: 1,
    }
}

#[test]
fn breakeven_exact_point() {
    let curve = curve_from(&[(0.9, 1.0, 0.3), (0.7, 0.78, 0.78), (0.5, 0.6, 1.0)]);
    let result = breakeven(&curve).unwrap();
    assert_eq!(result.precision, 0.78);
    assert_eq!(result.recall, 0.78);
    assert!((result.f1 - 0.78).abs() < 1e-12);
    assert!(!result.interpolated);
}

#[test]
fn breakeven_interpolates_crossing() {
    // Precision 1.0→0.5 while recall 0.2→1.0 crosses between the points:
    // t = 0.8/1.3, value 9/13.
    let curve = curve_from(&[(0.95, 1.0, 0.1), (0.9, 1.0, 0.2), (0.5, 0.5, 1.0)]);
    let result = breakeven(&curve).unwrap();
    assert!(result.interpolated);
    let expected = 9.0 / 13.0;
    assert!((result.precision - expected).abs() < 1e-12);
    assert!((result.recall - expected).abs() < 1e-12);
    assert!((result.f1 - expected).abs() < 1e-12);
    assert!((result.threshold - (0.9 - 0.4 * (0.8 / 1.3))).abs() < 1e-12);
}

#[test]
fn breakeven_perfect_curve_is_one() {
    let preds = vec![pred("c1", "s1", 0.9, true), pred("c2", "s1", 0.1, false)];
    let curve = pr_curve(&preds).unwrap();
    let result = breakeven(&curve).unwrap();
    assert_eq!(result.f1, 1.0);
}

#[test]
fn breakeven_empty_curve_fails() {
    let curve = PrCurve {
        points: vec![],
        positive_count: 0,
    };
    assert!(matches!(
        breakeven(&curve).unwrap_err(),
        crate::Error::EmptyCurve
    ));
}

proptest! {
    // The breakeven |P - R| never exceeds any curve point's gap, and f1
    // never exceeds the curve's best harmonic mean by more than rounding.
    #[test]
    fn breakeven_minimizes_gap(seed in 1u64..500) {
        let mut rng = TestRng(seed);
        let n = 2 + rng.below(40) as usize;
        let preds: Vec<LabeledPrediction> = (0..n)
            .map(|i| pred(&format!("c{i}"), "s1", (rng.below(20) as f64) / 20.0, rng.below(2) == 0))
            .collect();
        prop_assume!(preds.iter().any(|p| p.gold));
        let curve = pr_curve(&preds).unwrap();
        let result = breakeven(&curve).unwrap();
        let gap = (result.precision - result.recall).abs();
        for point in &curve.points {
            prop_assert!(gap <= (point.precision - point.recall).abs() + 1e-15);
        }
        let best_f1 = curve
            .points
            .iter()
            .map(|p| if p.precision + p.recall > 0.0 { 2.0 * p.precision * p.recall / (p.precision + p.recall) } else { 0.0 })
            .fold(0.0f64, f64::max);
        prop_assert!(result.f1 <= best_f1 + 1e-9);
    }
}

// ---------------------------------------------------------------------
// motion split
// ---------------------------------------------------------------------

#[test]
fn split_fraction_of_fifty_is_ten() {
    let motions: Vec<String> = (0..50).map(|i| format!("m{i:02}")).collect();
    let (train, test) = split_by_motion(&motions, 0.2, 17).unwrap();
    assert_eq!(test.len(), 10);
    assert_eq!(train.len(), 40);
}

#[test]
fn split_is_deterministic_and_partitioning() {
    let motions: Vec<String> = (0..13).map(|i| format!("m{i:02}")).collect();
    let (train1, test1) = split_by_motion(&motions, 0.3, 7).unwrap();
    let (train2, test2) = split_by_motion(&motions, 0.3, 7).unwrap();
    assert_eq!(train1, train2);
    assert_eq!(test1, test2);
    // Union is everything, intersection empty.
    let mut all: Vec<String> = train1.iter().chain(test1.iter()).cloned().collect();
    all.sort();
    assert_eq!(all, motions);
    // A different seed moves the boundary.
    let (_, test3) = split_by_motion(&motions, 0.3, 8).unwrap();
    assert_ne!(test1, test3);
}

#[test]
fn split_ignores_input_order() {
    let motions: Vec<String> = (0..20).map(|i| format!("m{i:02}")).collect();
    let mut reversed = motions.clone();
    reversed.reverse();
    let a = split_by_motion(&motions, 0.25, 3).unwrap();
    let b = split_by_motion(&reversed, 0.25, 3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn split_rejects_bad_fraction() {
    let motions: Vec<String> = (0..5).map(|i| format!("m{i}")).collect();
    assert!(split_by_motion(&motions, 0.0, 1).is_err());
    assert!(split_by_motion(&motions, 1.0, 1).is_err());
    assert!(split_by_motion(&motions[..1], 0.5, 1).is_err());
}

// ---------------------------------------------------------------------
// leave-one-motion-out
// ---------------------------------------------------------------------

fn verdict(claim: &str, speech_id: &str, mentioned: bool) -> MentionVerdict {
    MentionVerdict {
        claim_id: claim.into(),
        speech_id: speech_id.into(),
        label: if mentioned {
            SpeechMentionLabel::Implicit
        } else {
            SpeechMentionLabel::NotMentioned
        },
        votes: MentionVotes::default(),
    }
}

#[test]
fn lomo_trains_each_fold_on_other_motions() {
    let speeches = vec![
        speech("s1", "m1", Stance::Pro, &["text one"]),
        speech("s2", "m2", Stance::Pro, &["text two"]),
    ];
    // c1 is always mentioned on m1, never on m2.
    let verdicts = vec![verdict("c1", "s1", true), verdict("c1", "s2", false)];
    let registry = ScorerRegistry::with_builtins();
    let factory = registry.get("prior").unwrap();
    let preds = leave_one_motion_out(&speeches, &verdicts, factory, &ScorerInputs::new()).unwrap();
    assert_eq!(preds.len(), 2);
    // Fold m1 trained on m2 only: prior(c1) there is 0.0.
    let p1 = preds.iter().find(|p| p.speech_id == "s1").unwrap();
    assert_eq!(p1.score, 0.0);
    assert!(p1.gold);
    // Fold m2 trained on m1 only: prior(c1) there is 1.0.
    let p2 = preds.iter().find(|p| p.speech_id == "s2").unwrap();
    assert_eq!(p2.score, 1.0);
    assert!(!p2.gold);
}

#[test]
fn lomo_scores_ignore_held_out_labels() {
    let speeches = vec![
        speech("s1", "m1", Stance::Pro, &["a"]),
        speech("s2", "m1", Stance::Con, &["b"]),
        speech("s3", "m2", Stance::Pro, &["c"]),
        speech("s4", "m2", Stance::Con, &["d"]),
        speech("s5", "m3", Stance::Pro, &["e"]),
    ];
    let mut rng = TestRng(5);
    let claims = ["c1", "c2", "c3"];
    let base: Vec<MentionVerdict> = speeches
        .iter()
        .flat_map(|s| {
            let mut rng2 = TestRng(rng.next());
            claims
                .iter()
                .map(move |c| verdict(c, &s.speech_id.clone(), rng2.below(2) == 0))
                .collect::<Vec<_>>()
        })
        .collect();
    let registry = ScorerRegistry::with_builtins();
    let factory = registry.get("prior").unwrap();
    let inputs = ScorerInputs::new();
    let baseline = leave_one_motion_out(&speeches, &base, factory, &inputs).unwrap();
    // Flip every gold label on motion m2 (speeches s3, s4).
    let flipped: Vec<MentionVerdict> = base
        .iter()
        .map(|v| {
            if v.speech_id == "s3" || v.speech_id == "s4" {
                let mut v2 = v.clone();
                v2.label = match v.label {
                    SpeechMentionLabel::NotMentioned => SpeechMentionLabel::Implicit,
                    _ => SpeechMentionLabel::NotMentioned,
                };
                v2
            } else {
                v.clone()
            }
        })
        .collect();
    let permuted = leave_one_motion_out(&speeches, &flipped, factory, &inputs).unwrap();
    let scores = |preds: &[LabeledPrediction],
                  motion_speeches: &[&str]|
     -> BTreeMap<(String, String), u64> {
        preds
            .iter()
            .filter(|p| motion_speeches.contains(&p.speech_id.as_str()))
            .map(|p| ((p.claim_id.clone(), p.speech_id.clone()), p.score.to_bits()))
            .collect()
    };
    // Scores for m2 are bit-identical even though its labels changed.
    assert_eq!(
        scores(&baseline, &["s3", "s4"]),
        scores(&permuted, &["s3", "s4"])
    );
}

#[test]
fn lomo_rejects_unknown_speech() {
    let speeches = vec![speech("s1", "m1", Stance::Pro, &["a"])];
    let verdicts = vec![verdict("c1", "s-missing", true)];
    let registry = ScorerRegistry::with_builtins();
    let factory = registry.get("prior").unwrap();
    assert!(leave_one_motion_out(&speeches, &verdicts, factory, &ScorerInputs::new()).is_err());
}

// ---------------------------------------------------------------------
// coverage
// ---------------------------------------------------------------------

#[test]
fn coverage_full_and_empty() {
    let ids: Vec<String> = vec!["s1".into(), "s2".into()];
    let verdicts = vec![verdict("c1", "s1", true), verdict("c1", "s2", true)];
    let report = coverage_report(&ids, &verdicts, &BTreeMap::new());
    assert_eq!(report.coverage_pct, 100.0);
    let none = vec![verdict("c1", "s1", false)];
    let report = coverage_report(&ids, &none, &BTreeMap::new());
    assert_eq!(report.coverage_pct, 0.0);
}

#[test]
fn coverage_matches_hand_count() {
    let ids: Vec<String> = (1..=4).map(|i| format!("s{i}")).collect();
    let verdicts = vec![
        verdict("c1", "s1", true),
        verdict("c2", "s1", true),
        verdict("c1", "s2", false),
        verdict("c2", "s2", true),
        verdict("c1", "s3", false),
        // s4 has no labels at all.
    ];
    let candidates: BTreeMap<String, usize> = [
        ("s1".to_string(), 2),
        ("s2".to_string(), 2),
        ("s3".to_string(), 1),
        ("s4".to_string(), 3),
    ]
    .into_iter()
    .collect();
    let report = coverage_report(&ids, &verdicts, &candidates);
    // s1 and s2 covered out of 4 speeches.
    assert_eq!(report.coverage_pct, 50.0);
    // (2 + 1 + 0 + 0) / 4 mentions.
    assert_eq!(report.avg_mentions_per_speech, 0.75);
    // (2 + 2 + 1 + 3) / 4 candidates.
    assert_eq!(report.avg_potential_per_speech, 2.0);
}

// ---------------------------------------------------------------------
// top-fraction analysis
// ---------------------------------------------------------------------

#[test]
fn full_fraction_has_full_recall_and_base_rate_precision() {
    let preds = vec![
        pred("c1", "s1", 0.9, true),
        pred("c2", "s2", 0.8, false),
        pred("c3", "s3", 0.7, true),
        pred("c4", "s4", 0.6, false),
    ];
    let analysis = top_fraction_analysis(&preds, 1.0, 4).unwrap();
    assert_eq!(analysis.recall, 1.0);
    assert_eq!(analysis.precision, 0.5);
    assert_eq!(analysis.selected, 4);
}

#[test]
fn single_claim_selection_shares() {
    let preds = vec![
        pred("c1", "s1", 0.9, true),
        pred("c1", "s2", 0.8, true),
        pred("c2", "s3", 0.1, false),
        pred("c3", "s4", 0.1, false),
    ];
    let analysis = top_fraction_analysis(&preds, 0.5, 3).unwrap();
    assert_eq!(analysis.selected, 2);
    // Only c1 selected: 1 of 3 claims.
    assert!((analysis.distinct_claims_pct - 100.0 / 3.0).abs() < 1e-12);
    assert_eq!(analysis.top_claim_share.len(), 1);
    assert_eq!(analysis.top_claim_share[0].share, 1.0);
    let total_share: f64 = analysis.top_claim_share.iter().map(|s| s.share).sum();
    assert!(total_share <= 1.0 + 1e-12);
}

#[test]
fn top_fraction_hand_case() {
    let preds = vec![
        pred("c1", "s1", 0.9, true),
        pred("c2", "s1", 0.8, false),
        pred("c1", "s2", 0.7, true),
        pred("c3", "s2", 0.4, true),
        pred("c2", "s3", 0.3, false),
    ];
    let analysis = top_fraction_analysis(&preds, 0.4, 3).unwrap();
    // ceil(0.4 * 5) = 2 selected: c1@0.9 (gold) and c2@0.8 (not).
    assert_eq!(analysis.selected, 2);
    assert_eq!(analysis.precision, 0.5);
    assert!((analysis.recall - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn top_fraction_rejects_bad_fraction() {
    let preds = vec![pred("c1", "s1", 0.9, true)];
    assert!(top_fraction_analysis(&preds, 0.0, 1).is_err());
    assert!(top_fraction_analysis(&preds, 1.5, 1).is_err());
}

proptest! {
    // Order of the prediction list never matters.
    #[test]
    fn top_fraction_is_order_invariant(seed in 1u64..300) {
        let mut rng = TestRng(seed);
        let n = 3 + rng.below(25) as usize;
        let preds: Vec<LabeledPrediction> = (0..n)
            .map(|i| pred(&format!("c{}", i % 5), &format!("s{i}"), (rng.below(10) as f64) / 10.0, rng.below(2) == 0))
            .collect();
        let mut shuffled = preds.clone();
        for i in (1..shuffled.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            shuffled.swap(i, j);
        }
        let a = top_fraction_analysis(&preds, 0.3, 5).unwrap();
        let b = top_fraction_analysis(&shuffled, 0.3, 5).unwrap();
        prop_assert_eq!(a, b);
    }
}

// ---------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------

#[test]
fn relevance_histogram_single_bucket_when_uniform() {
    use crate::annotation::{RelevanceVotes, VerdictStance};
    let mut verdicts = Vec::new();
    for claim in ["c1", "c2", "c3"] {
        for motion in ["m1", "m2"] {
            verdicts.push(crate::annotation::RelevanceVerdict {
                claim_id: claim.into(),
                motion_id: motion.into(),
                relevant: true,
                stance: VerdictStance::Support,
                votes: RelevanceVotes {
                    support: 5,
                    oppose: 0,
                    not_relevant: 0,
                },
            });
        }
    }
    let table = figure_claims_vs_relevant_motions(&verdicts);
    assert_eq!(table.rows, vec![vec!["2".to_string(), "3".to_string()]]);
}

#[test]
fn prior_histogram_buckets_and_series() {
    let verdicts = vec![
        verdict("c1", "s1", true),
        verdict("c1", "s2", false),
        verdict("c2", "s1", false),
        verdict("c2", "s2", false),
    ];
    let table = figure_prior_histogram(&verdicts);
    assert_eq!(table.columns, vec!["series", "prior_bucket", "claim_count"]);
    // Two series, eleven buckets each.
    assert_eq!(table.rows.len(), 22);
    let zero_any: usize = table
        .rows
        .iter()
        .filter(|r| r[0] == "any" && r[1] == "0")
        .map(|r| r[2].parse::<usize>().unwrap())
        .sum();
    assert_eq!(zero_any, 1); // c2 never mentioned
    let half_any: usize = table
        .rows
        .iter()
        .filter(|r| r[0] == "any" && r[1] == "(0.4,0.5]")
        .map(|r| r[2].parse::<usize>().unwrap())
        .sum();
    assert_eq!(half_any, 1); // c1 has prior 0.5
}

#[test]
fn pr_overlay_emits_one_row_per_point() {
    let preds = vec![
        pred("c1", "s1", 0.9, true),
        pred("c2", "s1", 0.5, false),
        pred("c3", "s1", 0.2, true),
    ];
    let curve = pr_curve(&preds).unwrap();
    let points = curve.points.len();
    let table = figure_pr_overlay(&[("prior".to_string(), curve)]);
    assert_eq!(table.rows.len(), points);
    assert!(table.rows.iter().all(|r| r[0] == "prior"));
}

#[test]
fn figure_csv_writes_header_and_rows() {
    let table = FigureTable {
        columns: vec!["a".into(), "b".into()],
        rows: vec![vec!["1".into(), "2".into()]],
    };
    let mut out = Vec::new();
    table.write_csv(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "a,b\n1,2\n");
}
