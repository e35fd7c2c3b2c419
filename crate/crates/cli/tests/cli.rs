//! End-to-end tests of the `gpr` binary: exit codes, outputs, overrides.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gpr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gpr"))
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn sample_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../sample")
}

fn sample_config() -> PathBuf {
    sample_dir().join("config.txt")
}

/// A minimal self-contained bundle written into `dir`.
fn write_mini_bundle(dir: &Path) {
    fs::write(
        dir.join("kb.csv"),
        "claim_id,claim_text,rebuttal_text\n\
         c-econ,\"[ACTION] [TOPIC] is good for the economy\",\"While we need to take the economy into account, it cannot be the sole consideration.\"\n\
         c-choice,\"We must limit personal choice in this case\",\"Rights are not negotiable.\"\n",
    )
    .unwrap();
    fs::write(
        dir.join("motions.csv"),
        "motion_id,text,topic,action\nm1,\"We should introduce goal line technology\",\"goal line technology\",introduce\n\
         m2,\"We should legalize ivory trade\",\"ivory trade\",legalize\n",
    )
    .unwrap();
    fs::write(
        dir.join("s1.txt"),
        "Referees make mistakes. Introducing goal line technology is good for the economy.",
    )
    .unwrap();
    fs::write(
        dir.join("s2.txt"),
        "The game is fine. We must limit personal choice in this case.",
    )
    .unwrap();
    fs::write(
        dir.join("s3.txt"),
        "Legalizing ivory trade is good for the economy. Markets beat poachers.",
    )
    .unwrap();
    fs::write(
        dir.join("speeches.csv"),
        "speech_id,motion_id,stance,speaker_id,transcript_path\n\
         s1,m1,pro,spk1,s1.txt\ns2,m1,con,spk2,s2.txt\ns3,m2,pro,spk3,s3.txt\n",
    )
    .unwrap();
    let mut annotations = String::from("task,item_key,annotator_id,answer,is_probe,gold_answer\n");
    for (item, answers) in [
        (
            "c-econ|m1",
            ["support", "support", "support", "support", "not_relevant"],
        ),
        (
            "c-econ|m2",
            ["support", "support", "support", "oppose", "oppose"],
        ),
        (
            "c-choice|m1",
            ["oppose", "oppose", "oppose", "not_relevant", "not_relevant"],
        ),
        (
            "c-choice|m2",
            [
                "not_relevant",
                "not_relevant",
                "not_relevant",
                "support",
                "oppose",
            ],
        ),
    ] {
        for (i, answer) in answers.iter().enumerate() {
            annotations.push_str(&format!("relevance,{item},r{i},{answer},false,\n"));
        }
    }
    for (item, answers) in [
        (
            "c-econ|s1",
            [
                "explicit",
                "explicit",
                "explicit",
                "implicit",
                "not_mentioned",
            ],
        ),
        (
            "c-choice|s2",
            [
                "explicit",
                "explicit",
                "implicit",
                "not_mentioned",
                "not_mentioned",
            ],
        ),
        (
            "c-econ|s3",
            [
                "explicit",
                "explicit",
                "not_mentioned",
                "not_mentioned",
                "not_mentioned",
            ],
        ),
    ] {
        for (i, answer) in answers.iter().enumerate() {
            annotations.push_str(&format!("speech_mention,{item},w{i},{answer},false,\n"));
        }
    }
    fs::write(dir.join("annotations.csv"), annotations).unwrap();
}

fn bundle_args(dir: &Path) -> Vec<String> {
    vec![
        "--kb".into(),
        dir.join("kb.csv").display().to_string(),
        "--motions".into(),
        dir.join("motions.csv").display().to_string(),
        "--speeches".into(),
        dir.join("speeches.csv").display().to_string(),
        "--annotations".into(),
        dir.join("annotations.csv").display().to_string(),
    ]
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

#[test]
fn validate_sample_bundle_reports_counts() {
    let output = gpr()
        .args(["validate", "--config"])
        .arg(sample_config())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    assert!(out.contains("motions: 2"), "{out}");
    assert!(out.contains("speeches: 4"), "{out}");
    assert!(out.contains("knowledge base: 4 pairs"), "{out}");
}

#[test]
fn validate_dangling_motion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    fs::write(
        dir.path().join("speeches.csv"),
        "speech_id,motion_id,stance,speaker_id,transcript_path\ns1,m99,pro,spk1,s1.txt\n",
    )
    .unwrap();
    let output = gpr()
        .arg("validate")
        .args(bundle_args(dir.path()))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1), "{}", stderr(&output));
    assert!(stderr(&output).contains("m99"));
}

#[test]
fn validate_empty_kb_warns_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    fs::write(
        dir.path().join("kb.csv"),
        "claim_id,claim_text,rebuttal_text\n",
    )
    .unwrap();
    // Annotations reference knowledge-base claims, so drop them too.
    fs::write(
        dir.path().join("annotations.csv"),
        "task,item_key,annotator_id,answer,is_probe,gold_answer\n",
    )
    .unwrap();
    let output = gpr()
        .arg("validate")
        .args(bundle_args(dir.path()))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stderr(&output).contains("knowledge base is empty"));
}

#[test]
fn validate_missing_required_key_exits_two() {
    let output = gpr().arg("validate").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

// ---------------------------------------------------------------------
// aggregate
// ---------------------------------------------------------------------

#[test]
fn aggregate_writes_expected_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    let out_dir = dir.path().join("out");
    let output = gpr()
        .arg("aggregate")
        .args(bundle_args(dir.path()))
        .args(["--output-dir"])
        .arg(&out_dir)
        .args(["--run-id", "agg"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let run = out_dir.join("agg");

    let relevance = fs::read_to_string(run.join("relevance.csv")).unwrap();
    let mut lines = relevance.lines();
    assert_eq!(
        lines.next().unwrap(),
        "claim_id,motion_id,relevant,stance,support_votes,oppose_votes,not_relevant_votes"
    );
    let rows: BTreeMap<&str, &str> = relevance
        .lines()
        .skip(1)
        .map(|l| (&l[..l.find(',').unwrap() + 3], l))
        .map(|(_, l)| {
            let mut parts = l.splitn(3, ',');
            let claim = parts.next().unwrap();
            let motion = parts.next().unwrap();
            (
                Box::leak(format!("{claim}|{motion}").into_boxed_str()) as &str,
                l,
            )
        })
        .collect();
    assert!(rows["c-econ|m1"].contains("true,support,4,0,1"));
    assert!(rows["c-econ|m2"].contains("true,support,3,2,0"));
    assert!(rows["c-choice|m1"].contains("true,oppose,0,3,2"));
    assert!(rows["c-choice|m2"].contains("false,none,1,1,3"));

    let mentions = fs::read_to_string(run.join("speech_mention.csv")).unwrap();
    assert!(mentions.contains("c-econ,s1,explicit,3,1,1"));
    assert!(mentions.contains("c-choice,s2,explicit,2,1,2"));
    assert!(mentions.contains("c-econ,s3,not_mentioned,2,0,3"));

    assert!(run.join("agreement.json").exists());
    assert!(run.join("summary.json").exists());
    assert!(run.join("config.resolved.txt").exists());
    assert!(stdout(&output).contains("motion_claim"));
}

#[test]
fn aggregate_empty_annotations_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    fs::write(
        dir.path().join("annotations.csv"),
        "task,item_key,annotator_id,answer,is_probe,gold_answer\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let output = gpr()
        .arg("aggregate")
        .args(bundle_args(dir.path()))
        .arg("--output-dir")
        .arg(&out_dir)
        .args(["--run-id", "agg"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(!out_dir.join("agg").join("relevance.csv").exists());
}

// ---------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------

#[test]
fn evaluate_prior_lomo_prints_breakeven() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    let out_dir = dir.path().join("out");
    let output = gpr()
        .arg("evaluate")
        .args(bundle_args(dir.path()))
        .args(["--scorers", "prior"])
        .arg("--output-dir")
        .arg(&out_dir)
        .args(["--run-id", "eval"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    assert!(out.contains("prior"), "{out}");
    assert!(out.contains("lomo"), "{out}");
    let run = out_dir.join("eval");
    assert!(run.join("prior.predictions.csv").exists());
    assert!(run.join("prior.pr_curve.csv").exists());
    assert!(run.join("report.json").exists());
    // A single scorer emits no overlay.
    assert!(!run.join("pr_overlay.csv").exists());
}

#[test]
fn evaluate_two_scorers_emits_overlay() {
    let out_dir = tempfile::tempdir().unwrap();
    let output = gpr()
        .args(["evaluate", "--config"])
        .arg(sample_config())
        .arg("--output-dir")
        .arg(out_dir.path())
        .args(["--run-id", "eval"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let run = out_dir.path().join("eval");
    assert!(run.join("pr_overlay.csv").exists());
    assert!(run.join("coverage.json").exists());
    let overlay = fs::read_to_string(run.join("pr_overlay.csv")).unwrap();
    assert!(overlay.contains("prior"));
    assert!(overlay.contains("w2v-g"));
}

#[test]
fn evaluate_external_scorer_without_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    let output = gpr()
        .arg("evaluate")
        .args(bundle_args(dir.path()))
        .args(["--scorers", "external-direct"])
        .arg("--output-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(stderr(&output).contains("external_scores"));
}

#[test]
fn evaluate_unknown_scorer_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    let output = gpr()
        .arg("evaluate")
        .args(bundle_args(dir.path()))
        .args(["--scorers", "bert"])
        .arg("--output-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(stderr(&output).contains("unknown scorer"));
}

#[test]
fn evaluate_embedding_scorer_without_embeddings_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_mini_bundle(dir.path());
    let output = gpr()
        .arg("evaluate")
        .args(bundle_args(dir.path()))
        .args(["--scorers", "w2v-g"])
        .arg("--output-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(stderr(&output).contains("embeddings"));
}

/// Identical configuration and inputs give byte-identical outputs.
#[test]
fn evaluate_is_deterministic() {
    let out_dir = tempfile::tempdir().unwrap();
    let run_once = || -> BTreeMap<String, Vec<u8>> {
        let output = gpr()
            .args(["evaluate", "--config"])
            .arg(sample_config())
            .arg("--output-dir")
            .arg(out_dir.path())
            .args(["--run-id", "det"])
            .output()
            .unwrap();
        assert!(output.status.success(), "{}", stderr(&output));
        let run = out_dir.path().join("det");
        let mut files = BTreeMap::new();
        for entry in fs::read_dir(&run).unwrap() {
            let entry = entry.unwrap();
            files.insert(
                entry.file_name().to_string_lossy().into_owned(),
                fs::read(entry.path()).unwrap(),
            );
        }
        fs::remove_dir_all(&run).unwrap();
        files
    };
    let first = run_once();
    let second = run_once();
    assert_eq!(first.len(), second.len());
    for (name, bytes) in &first {
        assert_eq!(
            Some(bytes),
            second.get(name),
            "file {name} differs between runs"
        );
    }
}

// ---------------------------------------------------------------------
// rebut
// ---------------------------------------------------------------------

#[test]
fn rebut_detects_economy_claim_from_sample() {
    let out_dir = tempfile::tempdir().unwrap();
    let output = gpr()
        .args(["rebut", "--speech-id", "s1", "--config"])
        .arg(sample_config())
        .arg("--output-dir")
        .arg(out_dir.path())
        .args(["--run-id", "rebut"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let out = stdout(&output);
    assert!(out.contains("gpr-econ"), "{out}");
    assert!(
        out.contains("While we need to take the economy into account"),
        "{out}"
    );
    assert!(
        out.contains("introducing goal line technology is good for the economy"),
        "{out}"
    );
    let rendered: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(out_dir.path().join("rebut").join("rebuttal.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(rendered["speech_id"], "s1");
    assert_eq!(rendered["entries"][0]["claim_id"], "gpr-econ");
}

#[test]
fn rebut_threshold_above_scores_is_empty_but_ok() {
    let out_dir = tempfile::tempdir().unwrap();
    let output = gpr()
        .args([
            "rebut",
            "--speech-id",
            "s1",
            "--decision-threshold",
            "1.1",
            "--config",
        ])
        .arg(sample_config())
        .arg("--output-dir")
        .arg(out_dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stdout(&output).contains("no claim passed"));
}

#[test]
fn rebut_unknown_speech_exits_one() {
    let output = gpr()
        .args(["rebut", "--speech-id", "s99", "--config"])
        .arg(sample_config())
        .arg("--output-dir")
        .arg(tempfile::tempdir().unwrap().path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1), "{}", stderr(&output));
    assert!(stderr(&output).contains("s99"));
}

#[test]
fn rebut_transcript_requires_motion_and_stance() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.txt"), "Some argument. Another one.").unwrap();
    let output = gpr()
        .args(["rebut", "--transcript"])
        .arg(dir.path().join("t.txt"))
        .args(["--config"])
        .arg(sample_config())
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(stderr(&output).contains("--motion-id"));
}

// ---------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------

#[test]
fn figures_emits_requested_kinds() {
    let out_dir = tempfile::tempdir().unwrap();
    let output = gpr()
        .args(["figures", "--config"])
        .arg(sample_config())
        .args(["--figures", "claims_vs_relevant_motions,prior_histogram"])
        .arg("--output-dir")
        .arg(out_dir.path())
        .args(["--run-id", "figs"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let run = out_dir.path().join("figs");
    assert!(run.join("claims_vs_relevant_motions.csv").exists());
    assert!(run.join("prior_histogram.csv").exists());
    let histogram = fs::read_to_string(run.join("prior_histogram.csv")).unwrap();
    assert!(histogram.starts_with("series,prior_bucket,claim_count"));
}

#[test]
fn figures_unknown_kind_exits_two() {
    let output = gpr()
        .args(["figures", "--figures", "pie_chart", "--config"])
        .arg(sample_config())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
}

// ---------------------------------------------------------------------
// configuration precedence
// ---------------------------------------------------------------------

#[test]
fn flags_override_environment_which_overrides_file() {
    let out_dir = tempfile::tempdir().unwrap();
    // The file says max_responses = 2; the environment says 1; the flag 3.
    let output = gpr()
        .args([
            "rebut",
            "--speech-id",
            "s1",
            "--decision-threshold",
            "0",
            "--config",
        ])
        .arg(sample_config())
        .env("GPR_MAX_RESPONSES", "1")
        .args(["--max-responses", "3"])
        .arg("--output-dir")
        .arg(out_dir.path())
        .args(["--run-id", "prec"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let resolved =
        fs::read_to_string(out_dir.path().join("prec").join("config.resolved.txt")).unwrap();
    assert!(resolved.contains("max_responses = 3"), "{resolved}");

    // Environment alone beats the file.
    let output = gpr()
        .args([
            "rebut",
            "--speech-id",
            "s1",
            "--decision-threshold",
            "0",
            "--config",
        ])
        .arg(sample_config())
        .env("GPR_MAX_RESPONSES", "1")
        .arg("--output-dir")
        .arg(out_dir.path())
        .args(["--run-id", "prec2"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr(&output));
    let resolved =
        fs::read_to_string(out_dir.path().join("prec2").join("config.resolved.txt")).unwrap();
    assert!(resolved.contains("max_responses = 1"), "{resolved}");
    // With threshold 0 and max_responses 1, exactly one entry is rendered.
    let rendered: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(out_dir.path().join("prec2").join("rebuttal.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(rendered["entries"].as_array().unwrap().len(), 1);
}
