//! The five subcommands: validate, aggregate, evaluate, rebut, figures.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gpr_core::annotation::{
    aggregate_all, annotation_summary, collapse_mention_binary, collapse_plausibility_step1,
    collapse_relevance_binary, explicit_pairs, pairwise_agreement, probe_error_rate,
    select_candidate_pairs, vs_majority_agreement, AggregateOptions, AggregateOutcome,
    AnnotatorFilterCriteria, MentionVerdict, RelevanceVerdict, VerdictSet,
};
use gpr_core::corpus::{
    load_annotations, load_embeddings, load_external_scores, load_idebate_claims, load_motions,
    load_speeches, load_stopwords, AnnotationRecord, IdebateClaim, Motion, Speech, Stance, Task,
};
use gpr_core::eval::{
    breakeven, coverage_report, figure_claims_vs_relevant_motions, figure_pr_overlay,
    figure_prior_histogram, leave_one_motion_out, pr_curve, predictions_with_scorer,
    split_by_motion, top_fraction_analysis, BreakevenResult, FigureKind, LabeledPrediction,
    PrCurve, TopFractionAnalysis,
};
use gpr_core::kb::{kb_stats_default, load_kb, GerundLexicon, InstantiateOptions, KnowledgeBase};
use gpr_core::scoring::{
    funnel_candidates, generate_rebuttal, render_rebuttal_text, FunnelConfig, IdfTable,
    RelevanceMode, ScorerInputs, ScorerRegistry, TextEmbedder,
};
use gpr_core::text;

use crate::config::{CliError, CliResult, Settings};

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn input_err<T>(result: gpr_core::Result<T>) -> CliResult<T> {
    result.map_err(CliError::from)
}

// ---------------------------------------------------------------------
// shared loading
// ---------------------------------------------------------------------

struct Bundle {
    kb: Option<Arc<KnowledgeBase>>,
    motions: Option<Arc<Vec<Motion>>>,
    speeches: Option<Arc<Vec<Speech>>>,
    idebate: Option<Arc<Vec<IdebateClaim>>>,
    records: Option<Vec<AnnotationRecord>>,
}

impl Bundle {
    fn load(settings: &Settings) -> CliResult<Bundle> {
        let kb = match settings.path("kb") {
            Some(path) => Some(Arc::new(input_err(load_kb(&path))?)),
            None => None,
        };
        let motions = match settings.path("motions") {
            Some(path) => {
                let loaded = input_err(load_motions(&path))?;
                warn_all(&loaded.warnings);
                Some(Arc::new(loaded.value))
            }
            None => None,
        };
        let speeches = match (settings.path("speeches"), &motions) {
            (Some(path), Some(motions)) => {
                let loaded = input_err(load_speeches(&path, motions))?;
                warn_all(&loaded.warnings);
                Some(Arc::new(loaded.value))
            }
            (Some(_), None) => {
                return Err(CliError::Config(
                    "`speeches` requires `motions` to resolve motion ids".into(),
                ))
            }
            (None, _) => None,
        };
        let idebate = match (settings.path("idebate_claims"), &motions) {
            (Some(path), Some(motions)) => {
                let loaded = input_err(load_idebate_claims(&path, motions))?;
                warn_all(&loaded.warnings);
                Some(Arc::new(loaded.value))
            }
            (Some(_), None) => {
                return Err(CliError::Config(
                    "`idebate_claims` requires `motions` to resolve motion ids".into(),
                ))
            }
            (None, _) => None,
        };
        let records = match settings.path("annotations") {
            Some(path) => {
                let loaded = input_err(load_annotations(&path))?;
                warn_all(&loaded.warnings);
                Some(loaded.value)
            }
            None => None,
        };
        Ok(Bundle {
            kb,
            motions,
            speeches,
            idebate,
            records,
        })
    }

    fn require_kb(&self, for_what: &str) -> CliResult<Arc<KnowledgeBase>> {
        self.kb
            .clone()
            .ok_or_else(|| CliError::Config(format!("`kb` must be set for {for_what}")))
    }

    fn require_motions(&self, for_what: &str) -> CliResult<Arc<Vec<Motion>>> {
        self.motions
            .clone()
            .ok_or_else(|| CliError::Config(format!("`motions` must be set for {for_what}")))
    }

    fn require_speeches(&self, for_what: &str) -> CliResult<Arc<Vec<Speech>>> {
        self.speeches
            .clone()
            .ok_or_else(|| CliError::Config(format!("`speeches` must be set for {for_what}")))
    }

    fn require_records(&self, for_what: &str) -> CliResult<&[AnnotationRecord]> {
        self.records
            .as_deref()
            .ok_or_else(|| CliError::Config(format!("`annotations` must be set for {for_what}")))
    }

    fn idebate_slice(&self) -> Option<&[IdebateClaim]> {
        self.idebate.as_deref().map(|v| v.as_slice())
    }
}

fn aggregate_options(settings: &Settings) -> CliResult<AggregateOptions> {
    Ok(AggregateOptions {
        filter: AnnotatorFilterCriteria {
            min_questions: settings.parse("min_questions")?,
            min_common_answers: settings.parse("min_common_answers")?,
            min_peers: settings.parse("min_peers")?,
            min_avg_agreement: settings.parse("min_avg_agreement")?,
        },
        filter_sentence_task: true,
        fixpoint_filter: settings.bool("fixpoint_filter")?,
        sentence_min_answers: settings.parse("sentence_min_answers")?,
    })
}

fn instantiate_options(settings: &Settings) -> CliResult<InstantiateOptions> {
    let mut lexicon = GerundLexicon::default();
    if let Some(path) = settings.path("exceptions_lexicon") {
        input_err(lexicon.extend_from_csv(&path))?;
    }
    Ok(InstantiateOptions {
        mode: settings.parse("inflection")?,
        capitalize_sentence_start: settings.bool("capitalize_slot_start")?,
        lexicon,
    })
}

fn funnel_config(settings: &Settings) -> CliResult<FunnelConfig> {
    let relevance = match settings.get("relevance_mode") {
        Some("strict") | None => RelevanceMode::Strict,
        Some("lenient") => RelevanceMode::Lenient {
            min_votes: settings.parse("lenient_min_votes")?,
        },
        Some(other) => {
            return Err(CliError::Config(format!(
                "bad value for `relevance_mode`: `{other}` (strict or lenient)"
            )))
        }
    };
    Ok(FunnelConfig { relevance })
}

/// Create `<output_dir>/<run_id>/` and echo the resolved configuration
/// into it.
fn make_run_dir(settings: &Settings, command: &str) -> CliResult<PathBuf> {
    let output_dir = settings
        .path("output_dir")
        .unwrap_or_else(|| PathBuf::from("runs"));
    let run_id = match settings.get("run_id") {
        Some(id) => id.to_string(),
        None => {
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            format!("{stamp}-{command}")
        }
    };
    let run_dir = output_dir.join(run_id);
    fs::create_dir_all(&run_dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", run_dir.display())))?;
    fs::write(run_dir.join("config.resolved.txt"), settings.render())
        .map_err(|e| CliError::Input(format!("{}: {e}", run_dir.display())))?;
    Ok(run_dir)
}

fn write_file(dir: &Path, name: &str, content: &str) -> CliResult<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let rendered = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serializing {name}: {e}")))?;
    write_file(dir, name, &format!("{rendered}\n"))
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

pub fn validate(settings: &Settings) -> CliResult<()> {
    for key in ["kb", "motions", "speeches"] {
        settings.required_path(key, "`validate`")?;
    }
    let bundle = Bundle::load(settings)?;
    let kb = bundle.require_kb("`validate`")?;
    let motions = bundle.require_motions("`validate`")?;
    let speeches = bundle.require_speeches("`validate`")?;

    if kb.is_empty() {
        eprintln!("warning: the knowledge base is empty");
    }
    let stats = kb_stats_default(&kb);
    println!(
        "knowledge base: {} pairs, mean claim {:.2} tokens, mean rebuttal {:.2} tokens / {:.2} sentences",
        stats.pair_count, stats.mean_claim_tokens, stats.mean_rebuttal_tokens, stats.mean_rebuttal_sentences
    );
    println!("motions: {}", motions.len());
    let total_sentences: usize = speeches.iter().map(|s| s.sentences.len()).sum();
    println!(
        "speeches: {} ({} sentences)",
        speeches.len(),
        total_sentences
    );
    if let Some(idebate) = &bundle.idebate {
        println!("topic-specific claims: {}", idebate.len());
    }

    if let Some(records) = &bundle.records {
        check_annotation_refs(records, &kb, bundle.idebate_slice(), &motions, &speeches)?;
        let mut per_task: BTreeMap<&str, usize> = BTreeMap::new();
        for r in records {
            *per_task.entry(r.task.as_str()).or_default() += 1;
        }
        let rendered: Vec<String> = per_task
            .iter()
            .map(|(task, n)| format!("{task} {n}"))
            .collect();
        println!("annotations: {} ({})", records.len(), rendered.join(", "));
    }

    if let Some(path) = settings.path("embeddings") {
        let loaded = input_err(load_embeddings(&path))?;
        warn_all(&loaded.warnings);
        println!(
            "embeddings: {} tokens, dimension {}",
            loaded.value.len(),
            loaded.value.dimension()
        );
    }
    if let Some(path) = settings.path("external_scores") {
        let loaded = input_err(load_external_scores(&path))?;
        println!("external scores: {} entries", loaded.value.len());
    }
    println!("ok");
    Ok(())
}

/// Every annotation record must point at known claims and targets.
fn check_annotation_refs(
    records: &[AnnotationRecord],
    kb: &KnowledgeBase,
    idebate: Option<&[IdebateClaim]>,
    motions: &[Motion],
    speeches: &[Speech],
) -> CliResult<()> {
    let kb_ids: HashSet<&str> = kb.claim_ids().collect();
    let idebate_ids: HashSet<&str> = idebate
        .map(|claims| claims.iter().map(|c| c.claim_id.as_str()).collect())
        .unwrap_or_default();
    let motion_ids: HashSet<&str> = motions.iter().map(|m| m.motion_id.as_str()).collect();
    let speech_len: BTreeMap<&str, usize> = speeches
        .iter()
        .map(|s| (s.speech_id.as_str(), s.sentences.len()))
        .collect();

    for r in records {
        let claim = r.item_key.claim_id.as_str();
        if !kb_ids.contains(claim) && !idebate_ids.contains(claim) {
            return Err(CliError::Input(format!(
                "annotation for task {} references unknown claim `{claim}`",
                r.task
            )));
        }
        let target = r.item_key.target_id.as_str();
        match r.task {
            Task::Relevance => {
                if !motion_ids.contains(target) {
                    return Err(CliError::Input(format!(
                        "relevance annotation references unknown motion `{target}`"
                    )));
                }
            }
            Task::SpeechMention | Task::RebuttalPlausibility => {
                if !speech_len.contains_key(target) {
                    return Err(CliError::Input(format!(
                        "{} annotation references unknown speech `{target}`",
                        r.task
                    )));
                }
            }
            Task::SentenceMention => {
                let (speech_id, index) =
                    gpr_core::corpus::parse_sentence_key(target).map_err(CliError::Input)?;
                match speech_len.get(speech_id.as_str()) {
                    None => {
                        return Err(CliError::Input(format!(
                            "sentence annotation references unknown speech `{speech_id}`"
                        )))
                    }
                    Some(len) if index >= *len => {
                        return Err(CliError::Input(format!(
                            "sentence annotation references sentence {index} of `{speech_id}`, which has {len}"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// aggregate
// ---------------------------------------------------------------------

pub fn aggregate(settings: &Settings) -> CliResult<()> {
    let bundle = Bundle::load(settings)?;
    let records = bundle.require_records("`aggregate`")?;
    let opts = aggregate_options(settings)?;
    let outcome = input_err(aggregate_all(records, &opts))?;
    let run_dir = make_run_dir(settings, "aggregate")?;

    write_verdicts(&run_dir, &outcome.verdicts)?;
    if !outcome.removed_annotators.is_empty() {
        write_file(
            &run_dir,
            "removed_annotators.txt",
            &format!("{}\n", outcome.removed_annotators.join("\n")),
        )?;
    }

    // Agreement per task, with the collapsed views the reports use.
    let by_task = |task: Task| -> Vec<AnnotationRecord> {
        records.iter().filter(|r| r.task == task).cloned().collect()
    };
    let mut agreement = BTreeMap::new();
    let relevance_records = by_task(Task::Relevance);
    if !relevance_records.is_empty() {
        agreement.insert(
            "relevance",
            pairwise_agreement(&relevance_records, Some(&collapse_relevance_binary)),
        );
    }
    let mention_records = by_task(Task::SpeechMention);
    if !mention_records.is_empty() {
        agreement.insert(
            "speech_mention",
            pairwise_agreement(&mention_records, Some(&collapse_mention_binary)),
        );
    }
    if !outcome.sentence_records_kept.is_empty() {
        agreement.insert(
            "sentence_mention",
            pairwise_agreement(&outcome.sentence_records_kept, None),
        );
    }
    let plausibility_records = by_task(Task::RebuttalPlausibility);
    if !plausibility_records.is_empty() {
        let mut report =
            pairwise_agreement(&plausibility_records, Some(&collapse_plausibility_step1));
        report.vs_majority_mean_kappa = vs_majority_agreement(
            &plausibility_records,
            settings.parse("vs_majority_min_questions")?,
        );
        agreement.insert("rebuttal_plausibility", report);
    }
    write_json(&run_dir, "agreement.json", &agreement)?;

    let probe = input_err(probe_error_rate(records))?;
    if probe.total > 0 {
        write_json(&run_dir, "probe_report.json", &probe)?;
        if let Some(rate) = probe.overall {
            println!(
                "probe error rate: {:.3} over {} probe answers",
                rate, probe.total
            );
        }
    }

    let kb_ids: Option<HashSet<String>> = bundle
        .kb
        .as_ref()
        .map(|kb| kb.claim_ids().map(String::from).collect());
    let idebate_ids: Option<HashSet<String>> = bundle
        .idebate
        .as_ref()
        .map(|claims| claims.iter().map(|c| c.claim_id.clone()).collect());
    let summary = annotation_summary(&outcome.verdicts, kb_ids.as_ref(), idebate_ids.as_ref());
    write_json(&run_dir, "summary.json", &summary)?;
    println!(
        "{:<24} {:>10} {:>10}",
        "annotated pairs", "total", "positive"
    );
    for row in &summary {
        println!(
            "{:<24} {:>10} {:>10}",
            row.task, row.annotated, row.positive
        );
    }
    if !outcome.removed_annotators.is_empty() {
        println!(
            "removed annotators ({}): {}",
            outcome.removed_annotators.len(),
            outcome.removed_annotators.join(", ")
        );
    }
    println!("outputs: {}", run_dir.display());
    Ok(())
}

fn write_verdicts(run_dir: &Path, verdicts: &VerdictSet) -> CliResult<()> {
    use gpr_core::annotation::{
        write_mention_csv, write_plausibility_csv, write_relevance_csv, write_sentence_csv,
    };
    if !verdicts.relevance.is_empty() {
        let mut out = Vec::new();
        input_err(write_relevance_csv(&verdicts.relevance, &mut out))?;
        write_file(run_dir, "relevance.csv", &String::from_utf8_lossy(&out))?;
    }
    if !verdicts.mentions.is_empty() {
        let mut out = Vec::new();
        input_err(write_mention_csv(&verdicts.mentions, &mut out))?;
        write_file(
            run_dir,
            "speech_mention.csv",
            &String::from_utf8_lossy(&out),
        )?;
    }
    if !verdicts.sentence_mentions.is_empty() {
        let mut out = Vec::new();
        input_err(write_sentence_csv(&verdicts.sentence_mentions, &mut out))?;
        write_file(
            run_dir,
            "sentence_mention.csv",
            &String::from_utf8_lossy(&out),
        )?;
    }
    if !verdicts.plausibility.is_empty() {
        let mut out = Vec::new();
        input_err(write_plausibility_csv(&verdicts.plausibility, &mut out))?;
        write_file(
            run_dir,
            "rebuttal_plausibility.csv",
            &String::from_utf8_lossy(&out),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// scoring setup shared by evaluate / rebut / figures
// ---------------------------------------------------------------------

struct ScoringSetup {
    inputs: ScorerInputs,
    registry: ScorerRegistry,
    outcome: AggregateOutcome,
    gpr_mentions: Vec<MentionVerdict>,
    idebate_mentions: Vec<MentionVerdict>,
}

fn needs_embeddings(scorers: &[String]) -> bool {
    scorers.iter().any(|s| s.starts_with("w2v"))
}

fn needs_external(scorers: &[String]) -> bool {
    scorers.iter().any(|s| s.starts_with("external"))
}

fn scoring_setup(
    settings: &Settings,
    bundle: &Bundle,
    scorers: &[String],
) -> CliResult<ScoringSetup> {
    let records = bundle.require_records("scoring")?;
    let speeches = bundle.require_speeches("scoring")?;
    let outcome = input_err(aggregate_all(records, &aggregate_options(settings)?))?;

    let kb_ids: HashSet<String> = bundle
        .kb
        .as_ref()
        .map(|kb| kb.claim_ids().map(String::from).collect())
        .unwrap_or_default();
    let idebate_ids: HashSet<String> = bundle
        .idebate
        .as_ref()
        .map(|claims| claims.iter().map(|c| c.claim_id.clone()).collect())
        .unwrap_or_default();
    let gpr_mentions: Vec<MentionVerdict> = if kb_ids.is_empty() {
        outcome.verdicts.mentions.clone()
    } else {
        outcome
            .verdicts
            .mentions
            .iter()
            .filter(|v| kb_ids.contains(&v.claim_id))
            .cloned()
            .collect()
    };
    let idebate_mentions: Vec<MentionVerdict> = outcome
        .verdicts
        .mentions
        .iter()
        .filter(|v| idebate_ids.contains(&v.claim_id))
        .cloned()
        .collect();

    let mut inputs = ScorerInputs::new();
    inputs.kb = bundle.kb.clone();
    inputs.motions = bundle.motions.clone();
    inputs.idebate_claims = bundle.idebate.clone();
    inputs.instantiate = instantiate_options(settings)?;
    inputs.external_missing_score = settings.parse("external_missing_score")?;
    inputs.prior_default = settings.parse("prior_default")?;

    if needs_embeddings(scorers) {
        let path = settings.required_path(
            "embeddings",
            "an embedding scorer (`w2v-g`, `w2v-p`, `w2v-pd`)",
        )?;
        let loaded = input_err(load_embeddings(&path))?;
        warn_all(&loaded.warnings);
        inputs.embeddings = Some(Arc::new(loaded.value));
        inputs.idf = Some(Arc::new(match settings.path("idf_table") {
            Some(path) => input_err(IdfTable::load_csv(&path, settings.parse("idf_default")?))?,
            None => IdfTable::from_sentence_corpus(&speeches),
        }));
        if let Some(path) = settings.path("stopwords") {
            inputs.stopwords = Some(Arc::new(input_err(load_stopwords(&path))?));
        }
    }
    if needs_external(scorers) {
        let path = settings.required_path("external_scores", "an external scorer")?;
        let loaded = input_err(load_external_scores(&path))?;
        inputs.external_scores = Some(Arc::new(loaded.value));
        // Candidate sentences mirror the sentence-annotation selection:
        // explicit claims paired with similar-enough sentences.
        if scorers.iter().any(|s| s == "external-max") {
            if let (Some(embeddings), Some(idf), Some(kb), Some(motions)) =
                (&inputs.embeddings, &inputs.idf, &bundle.kb, &bundle.motions)
            {
                let mut embedder = TextEmbedder::new(embeddings.clone(), idf.clone());
                if let Some(stop) = &inputs.stopwords {
                    embedder = embedder.with_stopwords(stop.clone());
                }
                let candidates = candidate_sentence_keys(
                    settings,
                    kb,
                    motions,
                    bundle.idebate_slice(),
                    &speeches,
                    &outcome.verdicts.mentions,
                    &embedder,
                    &inputs.instantiate,
                )?;
                inputs.candidate_sentences = Some(Arc::new(candidates));
            }
        }
    }

    Ok(ScoringSetup {
        inputs,
        registry: ScorerRegistry::with_builtins(),
        outcome,
        gpr_mentions,
        idebate_mentions,
    })
}

/// (claim_id, sentence_key) pairs selected by similarity, restricted to
/// explicitly mentioned knowledge-base claims and to every labeled pair of
/// topic-specific claims.
#[allow(clippy::too_many_arguments)]
fn candidate_sentence_keys(
    settings: &Settings,
    kb: &KnowledgeBase,
    motions: &[Motion],
    idebate: Option<&[IdebateClaim]>,
    speeches: &[Speech],
    mentions: &[MentionVerdict],
    embedder: &TextEmbedder,
    instantiate_opts: &InstantiateOptions,
) -> CliResult<BTreeSet<(String, String)>> {
    let motion_by_id: BTreeMap<&str, &Motion> =
        motions.iter().map(|m| (m.motion_id.as_str(), m)).collect();
    let speech_motion: BTreeMap<&str, &str> = speeches
        .iter()
        .map(|s| (s.speech_id.as_str(), s.motion_id.as_str()))
        .collect();
    let mut keys = BTreeSet::new();

    // Knowledge-base claims: instantiated per motion, explicit pairs only.
    let explicit = explicit_pairs(mentions);
    let kb_ids: HashSet<&str> = kb.claim_ids().collect();
    let gpr_threshold: f64 = settings.parse("gpr_sentence_threshold")?;
    for (motion_id, motion) in &motion_by_id {
        let mut claim_texts: BTreeMap<String, String> = BTreeMap::new();
        for (claim, _) in kb.pairs() {
            claim_texts.insert(
                claim.claim_id.clone(),
                input_err(gpr_core::kb::instantiate(
                    &claim.text,
                    motion,
                    instantiate_opts,
                ))?,
            );
        }
        let allowed: BTreeSet<(String, String)> = explicit
            .iter()
            .filter(|(claim, speech)| {
                kb_ids.contains(claim.as_str())
                    && speech_motion.get(speech.as_str()) == Some(motion_id)
            })
            .cloned()
            .collect();
        if allowed.is_empty() {
            continue;
        }
        let pairs = input_err(select_candidate_pairs(
            &claim_texts,
            speeches,
            &allowed,
            embedder,
            gpr_threshold,
        ))?;
        for pair in pairs {
            keys.insert((pair.claim_id.clone(), pair.sentence_key()));
        }
    }

    // Topic-specific claims: every labeled pair counts as explicit.
    if let Some(claims) = idebate {
        let idebate_threshold: f64 = settings.parse("idebate_sentence_threshold")?;
        let claim_texts: BTreeMap<String, String> = claims
            .iter()
            .map(|c| (c.claim_id.clone(), c.text.clone()))
            .collect();
        let idebate_ids: HashSet<&str> = claims.iter().map(|c| c.claim_id.as_str()).collect();
        let allowed: BTreeSet<(String, String)> = mentions
            .iter()
            .filter(|v| idebate_ids.contains(v.claim_id.as_str()))
            .map(|v| (v.claim_id.clone(), v.speech_id.clone()))
            .collect();
        if !allowed.is_empty() {
            let pairs = input_err(select_candidate_pairs(
                &claim_texts,
                speeches,
                &allowed,
                embedder,
                idebate_threshold,
            ))?;
            for pair in pairs {
                keys.insert((pair.claim_id.clone(), pair.sentence_key()));
            }
        }
    }
    Ok(keys)
}

// ---------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------

#[derive(serde::Serialize)]
struct ScorerReport {
    scorer: String,
    protocol: String,
    predictions: usize,
    positives: usize,
    breakeven: BreakevenResult,
    top_fraction: TopFractionAnalysis,
}

#[derive(serde::Serialize)]
struct EvalReport {
    scorers: Vec<ScorerReport>,
}

fn render_report_text(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<16} {:<6} {:>7} {:>9} {:>10} {:>10} {:>8} {:>8}\n",
        "scorer", "proto", "pairs", "positives", "threshold", "precision", "recall", "f1"
    ));
    for row in &report.scorers {
        out.push_str(&format!(
            "{:<16} {:<6} {:>7} {:>9} {:>10.4} {:>10.4} {:>8.4} {:>8.4}\n",
            row.scorer,
            row.protocol,
            row.predictions,
            row.positives,
            row.breakeven.threshold,
            row.breakeven.precision,
            row.breakeven.recall,
            row.breakeven.f1
        ));
    }
    out
}

fn predictions_csv(predictions: &[LabeledPrediction]) -> String {
    let mut out = String::from("claim_id,speech_id,score,gold\n");
    for p in predictions {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.claim_id, p.speech_id, p.score, p.gold
        ));
    }
    out
}

fn curve_csv(curve: &PrCurve) -> String {
    let mut out = String::from("threshold,precision,recall\n");
    for p in &curve.points {
        out.push_str(&format!("{},{},{}\n", p.threshold, p.precision, p.recall));
    }
    out
}

/// Universe and predictions for one scorer under the configured protocol.
fn run_scorer(
    settings: &Settings,
    setup: &ScoringSetup,
    speeches: &[Speech],
    name: &str,
) -> CliResult<(String, Vec<LabeledPrediction>)> {
    let universe: &[MentionVerdict] = if name == "w2v-p" || name == "w2v-pd" {
        &setup.idebate_mentions
    } else {
        &setup.gpr_mentions
    };
    if universe.is_empty() {
        return Err(CliError::Input(format!(
            "no labeled claim-speech pairs available for scorer `{name}`"
        )));
    }
    let protocol = match settings.get("eval_protocol") {
        Some("auto") | None => {
            if name == "prior" {
                "lomo"
            } else {
                "all"
            }
        }
        Some(other) => other,
    }
    .to_string();
    let predictions = match protocol.as_str() {
        "lomo" => {
            let factory = setup.registry.get(name).map_err(CliError::from)?;
            leave_one_motion_out(speeches, universe, factory, &setup.inputs)
                .map_err(CliError::from)?
        }
        "all" => {
            let scorer = setup
                .registry
                .build(name, &setup.inputs, universe)
                .map_err(CliError::from)?;
            predictions_with_scorer(speeches, universe, scorer.as_ref()).map_err(CliError::from)?
        }
        "split" => {
            let speech_motion: BTreeMap<&str, &str> = speeches
                .iter()
                .map(|s| (s.speech_id.as_str(), s.motion_id.as_str()))
                .collect();
            let motion_ids: Vec<String> = universe
                .iter()
                .filter_map(|v| speech_motion.get(v.speech_id.as_str()))
                .map(|m| m.to_string())
                .collect();
            let (train_motions, test_motions) = split_by_motion(
                &motion_ids,
                settings.parse("split_fraction")?,
                settings.parse("split_seed")?,
            )
            .map_err(CliError::from)?;
            let in_set = |v: &MentionVerdict, set: &[String]| {
                speech_motion
                    .get(v.speech_id.as_str())
                    .map(|m| set.iter().any(|x| x == m))
                    .unwrap_or(false)
            };
            let train: Vec<MentionVerdict> = universe
                .iter()
                .filter(|v| in_set(v, &train_motions))
                .cloned()
                .collect();
            let test: Vec<MentionVerdict> = universe
                .iter()
                .filter(|v| in_set(v, &test_motions))
                .cloned()
                .collect();
            let scorer = setup
                .registry
                .build(name, &setup.inputs, &train)
                .map_err(CliError::from)?;
            predictions_with_scorer(speeches, &test, scorer.as_ref()).map_err(CliError::from)?
        }
        other => {
            return Err(CliError::Config(format!(
                "bad value for `eval_protocol`: `{other}` (auto, all, lomo or split)"
            )))
        }
    };
    Ok((protocol, predictions))
}

pub fn evaluate(settings: &Settings) -> CliResult<()> {
    let scorers = settings.list("scorers");
    if scorers.is_empty() {
        return Err(CliError::Config(
            "`scorers` must name at least one scorer".into(),
        ));
    }
    let bundle = Bundle::load(settings)?;
    let speeches = bundle.require_speeches("`evaluate`")?;
    let setup = scoring_setup(settings, &bundle, &scorers)?;
    let run_dir = make_run_dir(settings, "evaluate")?;
    let top_fraction: f64 = settings.parse("top_fraction")?;

    let mut report = EvalReport {
        scorers: Vec::new(),
    };
    let mut curves: Vec<(String, PrCurve)> = Vec::new();
    for name in &scorers {
        let (protocol, predictions) = run_scorer(settings, &setup, &speeches, name)?;
        write_file(
            &run_dir,
            &format!("{name}.predictions.csv"),
            &predictions_csv(&predictions),
        )?;
        let curve = pr_curve(&predictions).map_err(CliError::from)?;
        write_file(
            &run_dir,
            &format!("{name}.pr_curve.csv"),
            &curve_csv(&curve),
        )?;
        let be = breakeven(&curve).map_err(CliError::from)?;
        let total_claims = bundle.kb.as_ref().map(|kb| kb.len()).unwrap_or_else(|| {
            predictions
                .iter()
                .map(|p| p.claim_id.as_str())
                .collect::<HashSet<_>>()
                .len()
        });
        let top = top_fraction_analysis(&predictions, top_fraction, total_claims)
            .map_err(CliError::from)?;
        report.scorers.push(ScorerReport {
            scorer: name.clone(),
            protocol,
            predictions: predictions.len(),
            positives: curve.positive_count,
            breakeven: be,
            top_fraction: top,
        });
        curves.push((name.clone(), curve));
    }

    if curves.len() >= 2 {
        let overlay = figure_pr_overlay(&curves);
        let mut out = Vec::new();
        input_err(overlay.write_csv(&mut out))?;
        write_file(&run_dir, "pr_overlay.csv", &String::from_utf8_lossy(&out))?;
    }

    // Coverage relative to the lenient candidate lists.
    if let (Some(kb), Some(motions)) = (&bundle.kb, &bundle.motions) {
        let lenient = FunnelConfig {
            relevance: RelevanceMode::Lenient {
                min_votes: settings.parse("lenient_min_votes")?,
            },
        };
        let motion_by_id: BTreeMap<&str, &Motion> =
            motions.iter().map(|m| (m.motion_id.as_str(), m)).collect();
        let mut candidate_counts: BTreeMap<String, usize> = BTreeMap::new();
        for speech in speeches.iter() {
            if let Some(motion) = motion_by_id.get(speech.motion_id.as_str()) {
                let candidates = funnel_candidates(
                    speech,
                    motion,
                    kb,
                    &setup.outcome.verdicts.relevance,
                    &lenient,
                );
                candidate_counts.insert(speech.speech_id.clone(), candidates.len());
            }
        }
        let speech_ids: Vec<String> = speeches.iter().map(|s| s.speech_id.clone()).collect();
        let coverage = coverage_report(&speech_ids, &setup.gpr_mentions, &candidate_counts);
        write_json(&run_dir, "coverage.json", &coverage)?;
        println!(
            "coverage: {:.1}% of speeches, {:.2} mentions and {:.2} candidates per speech",
            coverage.coverage_pct,
            coverage.avg_mentions_per_speech,
            coverage.avg_potential_per_speech
        );
    }

    write_json(&run_dir, "report.json", &report)?;
    let text = render_report_text(&report);
    write_file(&run_dir, "report.txt", &text)?;
    print!("{text}");
    println!("outputs: {}", run_dir.display());
    Ok(())
}

// ---------------------------------------------------------------------
// rebut
// ---------------------------------------------------------------------

pub struct RebutTarget {
    pub speech_id: Option<String>,
    pub transcript: Option<PathBuf>,
    pub motion_id: Option<String>,
    pub stance: Option<String>,
}

pub fn rebut(settings: &Settings, target: &RebutTarget) -> CliResult<()> {
    let bundle = Bundle::load(settings)?;
    let kb = bundle.require_kb("`rebut`")?;
    let motions = bundle.require_motions("`rebut`")?;
    let speeches = bundle.require_speeches("`rebut`")?;
    let scorer_name = settings.get("scorer").unwrap_or("prior").to_string();
    let setup = scoring_setup(settings, &bundle, std::slice::from_ref(&scorer_name))?;

    let speech: Speech = match (&target.speech_id, &target.transcript) {
        (Some(id), None) => speeches
            .iter()
            .find(|s| s.speech_id == *id)
            .cloned()
            .ok_or_else(|| CliError::Input(format!("unknown speech id `{id}`")))?,
        (None, Some(path)) => {
            let motion_id = target.motion_id.clone().ok_or_else(|| {
                CliError::Config("`--motion-id` is required with `--transcript`".into())
            })?;
            if !motions.iter().any(|m| m.motion_id == motion_id) {
                return Err(CliError::Input(format!("unknown motion id `{motion_id}`")));
            }
            let stance: Stance = target
                .stance
                .as_deref()
                .ok_or_else(|| {
                    CliError::Config("`--stance` is required with `--transcript`".into())
                })?
                .parse()
                .map_err(CliError::Config)?;
            let content = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let sentences = text::split_sentences(&content);
            if sentences.is_empty() {
                return Err(CliError::Input(format!(
                    "{}: transcript contains no sentences",
                    path.display()
                )));
            }
            Speech {
                speech_id: path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "transcript".into()),
                motion_id,
                stance,
                speaker_id: "external".into(),
                sentences,
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "give either `--speech-id` or `--transcript`, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Config(
                "`rebut` needs `--speech-id` or `--transcript`".into(),
            ))
        }
    };
    let motion = motions
        .iter()
        .find(|m| m.motion_id == speech.motion_id)
        .ok_or_else(|| CliError::Input(format!("unknown motion id `{}`", speech.motion_id)))?;

    let scorer = setup
        .registry
        .build(&scorer_name, &setup.inputs, &setup.gpr_mentions)
        .map_err(CliError::from)?;

    // Decision threshold: configured, else the break-even threshold over
    // the labeled universe.
    let decision_threshold: f64 = match settings.parse_opt("decision_threshold")? {
        Some(t) => t,
        None => {
            let labeled = predictions_with_scorer(&speeches, &setup.gpr_mentions, scorer.as_ref());
            match labeled
                .and_then(|preds| pr_curve(&preds))
                .and_then(|c| breakeven(&c))
            {
                Ok(be) => {
                    eprintln!(
                        "note: decision threshold defaults to the break-even threshold {:.4}",
                        be.threshold
                    );
                    be.threshold
                }
                Err(err) => {
                    eprintln!("warning: cannot derive a break-even threshold ({err}); using 0");
                    0.0
                }
            }
        }
    };

    let response = generate_rebuttal(
        &speech,
        motion,
        &kb,
        &setup.outcome.verdicts.relevance,
        scorer.as_ref(),
        &funnel_config(settings)?,
        &instantiate_options(settings)?,
        decision_threshold,
        settings.parse("max_responses")?,
    )
    .map_err(CliError::from)?;

    let run_dir = make_run_dir(settings, "rebut")?;
    write_json(&run_dir, "rebuttal.json", &response)?;
    let text = render_rebuttal_text(&response);
    write_file(&run_dir, "rebuttal.txt", &text)?;
    print!("{text}");
    println!("outputs: {}", run_dir.display());
    Ok(())
}

// ---------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------

pub fn figures(settings: &Settings) -> CliResult<()> {
    let kinds: Vec<FigureKind> = settings
        .list("figures")
        .iter()
        .map(|k| k.parse::<FigureKind>().map_err(CliError::Config))
        .collect::<CliResult<_>>()?;
    if kinds.is_empty() {
        return Err(CliError::Config(
            "`figures` must name at least one figure kind".into(),
        ));
    }
    let bundle = Bundle::load(settings)?;
    let records = bundle.require_records("`figures`")?;
    let outcome = input_err(aggregate_all(records, &aggregate_options(settings)?))?;
    let run_dir = make_run_dir(settings, "figures")?;

    for kind in kinds {
        match kind {
            FigureKind::ClaimsVsRelevantMotions => {
                let relevance: Vec<RelevanceVerdict> = match &bundle.kb {
                    Some(kb) => {
                        let ids: HashSet<&str> = kb.claim_ids().collect();
                        outcome
                            .verdicts
                            .relevance
                            .iter()
                            .filter(|v| ids.contains(v.claim_id.as_str()))
                            .cloned()
                            .collect()
                    }
                    None => outcome.verdicts.relevance.clone(),
                };
                let table = figure_claims_vs_relevant_motions(&relevance);
                let mut out = Vec::new();
                input_err(table.write_csv(&mut out))?;
                write_file(
                    &run_dir,
                    "claims_vs_relevant_motions.csv",
                    &String::from_utf8_lossy(&out),
                )?;
            }
            FigureKind::PriorHistogram => {
                let mentions: Vec<MentionVerdict> = match &bundle.kb {
                    Some(kb) => {
                        let ids: HashSet<&str> = kb.claim_ids().collect();
                        outcome
                            .verdicts
                            .mentions
                            .iter()
                            .filter(|v| ids.contains(v.claim_id.as_str()))
                            .cloned()
                            .collect()
                    }
                    None => outcome.verdicts.mentions.clone(),
                };
                let table = figure_prior_histogram(&mentions);
                let mut out = Vec::new();
                input_err(table.write_csv(&mut out))?;
                write_file(
                    &run_dir,
                    "prior_histogram.csv",
                    &String::from_utf8_lossy(&out),
                )?;
            }
            FigureKind::PrOverlay => {
                let scorers = settings.list("scorers");
                let speeches = bundle.require_speeches("`figures pr_overlay`")?;
                let setup = scoring_setup(settings, &bundle, &scorers)?;
                let mut curves = Vec::new();
                for name in &scorers {
                    let (_, predictions) = run_scorer(settings, &setup, &speeches, name)?;
                    curves.push((
                        name.clone(),
                        pr_curve(&predictions).map_err(CliError::from)?,
                    ));
                }
                let table = figure_pr_overlay(&curves);
                let mut out = Vec::new();
                input_err(table.write_csv(&mut out))?;
                write_file(&run_dir, "pr_overlay.csv", &String::from_utf8_lossy(&out))?;
            }
        }
    }
    println!("outputs: {}", run_dir.display());
    Ok(())
}
