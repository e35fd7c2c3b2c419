//! Layered run configuration: built-in defaults, then the config file,
//! then `GPR_*` environment variables, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

/// Errors that decide the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad or incoherent configuration: exit 2.
    Config(String),
    /// Broken input data: exit 1.
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Input(msg) => write!(f, "input error: {msg}"),
        }
    }
}

impl From<gpr_core::Error> for CliError {
    fn from(err: gpr_core::Error) -> Self {
        use gpr_core::Error::*;
        match err {
            UnknownScorer { .. } | MissingScorerInput { .. } | OutOfRange { .. } => {
                CliError::Config(err.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Every configuration key, overridable from the command line by a flag of
/// the same name and from the environment as `GPR_<KEY>`.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigOverrides {
    /// Key=value config file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Knowledge-base CSV (claim_id,claim_text,rebuttal_text).
    #[arg(long, global = true, value_name = "FILE")]
    pub kb: Option<String>,
    /// Motions CSV (motion_id,text,topic,action).
    #[arg(long, global = true, value_name = "FILE")]
    pub motions: Option<String>,
    /// Speeches CSV (speech_id,motion_id,stance,speaker_id,transcript_path).
    #[arg(long, global = true, value_name = "FILE")]
    pub speeches: Option<String>,
    /// Topic-specific claims CSV.
    #[arg(long, global = true, value_name = "FILE")]
    pub idebate_claims: Option<String>,
    /// Raw crowd answers CSV.
    #[arg(long, global = true, value_name = "FILE")]
    pub annotations: Option<String>,
    /// Word-vector file (optional `<count> <dim>` header, then token + values).
    #[arg(long, global = true, value_name = "FILE")]
    pub embeddings: Option<String>,
    /// Externally produced scores CSV (claim_id,target_key,score).
    #[arg(long, global = true, value_name = "FILE")]
    pub external_scores: Option<String>,
    /// Idf table CSV (token,idf); default is computed from the speeches.
    #[arg(long, global = true, value_name = "FILE")]
    pub idf_table: Option<String>,
    /// Stopword list, one token per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub stopwords: Option<String>,
    /// Gerund exceptions CSV (verb,gerund).
    #[arg(long, global = true, value_name = "FILE")]
    pub exceptions_lexicon: Option<String>,
    /// Directory run outputs are written under.
    #[arg(long, global = true, value_name = "DIR")]
    pub output_dir: Option<String>,
    /// Name of this run's output subdirectory (default: timestamped).
    #[arg(long, global = true)]
    pub run_id: Option<String>,

    /// Relevance gate for the funnel: strict or lenient.
    #[arg(long, global = true)]
    pub relevance_mode: Option<String>,
    /// Votes required by the lenient relevance gate.
    #[arg(long, global = true)]
    pub lenient_min_votes: Option<String>,
    /// Claim-sentence similarity threshold for knowledge-base claims.
    #[arg(long, global = true)]
    pub gpr_sentence_threshold: Option<String>,
    /// Claim-sentence similarity threshold for topic-specific claims.
    #[arg(long, global = true)]
    pub idebate_sentence_threshold: Option<String>,
    /// Minimum score a claim needs to enter the rebuttal response.
    #[arg(long, global = true)]
    pub decision_threshold: Option<String>,
    /// Scorers evaluated by `evaluate`/`figures`, comma-separated.
    #[arg(long, global = true)]
    pub scorers: Option<String>,
    /// Scorer used by `rebut`.
    #[arg(long, global = true)]
    pub scorer: Option<String>,
    /// Fraction of motions held out by the split protocol.
    #[arg(long, global = true)]
    pub split_fraction: Option<String>,
    /// Seed for the motion split.
    #[arg(long, global = true)]
    pub split_seed: Option<String>,
    /// Evaluation protocol: auto, all, lomo or split.
    #[arg(long, global = true)]
    pub eval_protocol: Option<String>,
    /// Slot rendering for the action verb: gerund or infinitive.
    #[arg(long, global = true)]
    pub inflection: Option<String>,
    /// Upper-case the first letter when a slot starts the sentence.
    #[arg(long, global = true)]
    pub capitalize_slot_start: Option<String>,
    /// Annotator filter: minimum questions answered.
    #[arg(long, global = true)]
    pub min_questions: Option<String>,
    /// Annotator filter: minimum common answers per counted peer.
    #[arg(long, global = true)]
    pub min_common_answers: Option<String>,
    /// Annotator filter: minimum number of counted peers.
    #[arg(long, global = true)]
    pub min_peers: Option<String>,
    /// Annotator filter: minimum mean kappa with counted peers.
    #[arg(long, global = true)]
    pub min_avg_agreement: Option<String>,
    /// Minimum remaining answers for a sentence-level verdict.
    #[arg(long, global = true)]
    pub sentence_min_answers: Option<String>,
    /// Iterate the annotator filter to a fixpoint.
    #[arg(long, global = true)]
    pub fixpoint_filter: Option<String>,
    /// External score aggregation: direct or max_over_sentences.
    #[arg(long, global = true)]
    pub external_aggregation: Option<String>,
    /// Score assigned to pairs missing from the external file.
    #[arg(long, global = true)]
    pub external_missing_score: Option<String>,
    /// Prior score for claims unseen in training.
    #[arg(long, global = true)]
    pub prior_default: Option<String>,
    /// Maximum entries in a rebuttal response.
    #[arg(long, global = true)]
    pub max_responses: Option<String>,
    /// Fraction inspected by the top-fraction analysis.
    #[arg(long, global = true)]
    pub top_fraction: Option<String>,
    /// Minimum questions for the against-majority agreement.
    #[arg(long, global = true)]
    pub vs_majority_min_questions: Option<String>,
    /// Default idf weight when loading an external idf table.
    #[arg(long, global = true)]
    pub idf_default: Option<String>,
    /// Figure kinds emitted by `figures`, comma-separated.
    #[arg(long, global = true)]
    pub figures: Option<String>,
}

impl ConfigOverrides {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |key: &'static str, value: &Option<String>| {
            if let Some(v) = value {
                out.push((key, v.clone()));
            }
        };
        push("kb", &self.kb);
        push("motions", &self.motions);
        push("speeches", &self.speeches);
        push("idebate_claims", &self.idebate_claims);
        push("annotations", &self.annotations);
        push("embeddings", &self.embeddings);
        push("external_scores", &self.external_scores);
        push("idf_table", &self.idf_table);
        push("stopwords", &self.stopwords);
        push("exceptions_lexicon", &self.exceptions_lexicon);
        push("output_dir", &self.output_dir);
        push("run_id", &self.run_id);
        push("relevance_mode", &self.relevance_mode);
        push("lenient_min_votes", &self.lenient_min_votes);
        push("gpr_sentence_threshold", &self.gpr_sentence_threshold);
        push(
            "idebate_sentence_threshold",
            &self.idebate_sentence_threshold,
        );
        push("decision_threshold", &self.decision_threshold);
        push("scorers", &self.scorers);
        push("scorer", &self.scorer);
        push("split_fraction", &self.split_fraction);
        push("split_seed", &self.split_seed);
        push("eval_protocol", &self.eval_protocol);
        push("inflection", &self.inflection);
        push("capitalize_slot_start", &self.capitalize_slot_start);
        push("min_questions", &self.min_questions);
        push("min_common_answers", &self.min_common_answers);
        push("min_peers", &self.min_peers);
        push("min_avg_agreement", &self.min_avg_agreement);
        push("sentence_min_answers", &self.sentence_min_answers);
        push("fixpoint_filter", &self.fixpoint_filter);
        push("external_aggregation", &self.external_aggregation);
        push("external_missing_score", &self.external_missing_score);
        push("prior_default", &self.prior_default);
        push("max_responses", &self.max_responses);
        push("top_fraction", &self.top_fraction);
        push("vs_majority_min_questions", &self.vs_majority_min_questions);
        push("idf_default", &self.idf_default);
        push("figures", &self.figures);
        out
    }
}

const KNOWN_KEYS: &[&str] = &[
    "kb",
    "motions",
    "speeches",
    "idebate_claims",
    "annotations",
    "embeddings",
    "external_scores",
    "idf_table",
    "stopwords",
    "exceptions_lexicon",
    "output_dir",
    "run_id",
    "relevance_mode",
    "lenient_min_votes",
    "gpr_sentence_threshold",
    "idebate_sentence_threshold",
    "decision_threshold",
    "scorers",
    "scorer",
    "split_fraction",
    "split_seed",
    "eval_protocol",
    "inflection",
    "capitalize_slot_start",
    "min_questions",
    "min_common_answers",
    "min_peers",
    "min_avg_agreement",
    "sentence_min_answers",
    "fixpoint_filter",
    "external_aggregation",
    "external_missing_score",
    "prior_default",
    "max_responses",
    "top_fraction",
    "vs_majority_min_questions",
    "idf_default",
    "figures",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Default,
    File,
    Env,
    Flag,
}

/// The resolved key-value view of a run.
#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, (String, Source)>,
    /// Directory of the config file; relative paths written in the file
    /// resolve against it.
    config_dir: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(overrides: &ConfigOverrides) -> CliResult<Settings> {
        let mut values: BTreeMap<String, (String, Source)> = BTreeMap::new();
        for (key, value) in [
            ("output_dir", "runs"),
            ("relevance_mode", "strict"),
            ("lenient_min_votes", "2"),
            ("gpr_sentence_threshold", "0.5"),
            ("idebate_sentence_threshold", "0.7"),
            ("scorers", "prior"),
            ("scorer", "prior"),
            ("split_fraction", "0.2"),
            ("split_seed", "17"),
            ("eval_protocol", "auto"),
            ("inflection", "gerund"),
            ("capitalize_slot_start", "false"),
            ("min_questions", "10"),
            ("min_common_answers", "5"),
            ("min_peers", "3"),
            ("min_avg_agreement", "0.2"),
            ("sentence_min_answers", "5"),
            ("fixpoint_filter", "false"),
            ("external_aggregation", "direct"),
            ("external_missing_score", "-1e9"),
            ("prior_default", "0"),
            ("max_responses", "3"),
            ("top_fraction", "0.2"),
            ("vs_majority_min_questions", "20"),
            ("idf_default", "1"),
            ("figures", "claims_vs_relevant_motions,prior_histogram"),
        ] {
            values.insert(key.to_string(), (value.to_string(), Source::Default));
        }

        let mut config_dir = None;
        if let Some(path) = &overrides.config {
            let content = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            config_dir = path.parent().map(Path::to_path_buf);
            for (line_no, line) in content.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Config(format!(
                        "{}:{}: expected `key = value`, got `{line}`",
                        path.display(),
                        line_no + 1
                    ))
                })?;
                let key = key.trim();
                if !KNOWN_KEYS.contains(&key) {
                    return Err(CliError::Config(format!(
                        "{}:{}: unknown key `{key}`",
                        path.display(),
                        line_no + 1
                    )));
                }
                values.insert(key.to_string(), (value.trim().to_string(), Source::File));
            }
        }

        for key in KNOWN_KEYS {
            let env_key = format!("GPR_{}", key.to_uppercase());
            if let Ok(value) = std::env::var(&env_key) {
                values.insert(key.to_string(), (value, Source::Env));
            }
        }

        for (key, value) in overrides.pairs() {
            values.insert(key.to_string(), (value, Source::Flag));
        }

        Ok(Settings { values, config_dir })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values
            .get(key)
            .map(|(s, _)| s.as_str())
            .filter(|s| !s.is_empty())
    }

    /// A configured path. Relative paths written in the config file
    /// resolve against the file's directory; flag and environment paths
    /// resolve against the working directory.
    pub fn path(&self, key: &str) -> Option<PathBuf> {
        let (raw, source) = self.values.get(key)?;
        if raw.is_empty() {
            return None;
        }
        let p = PathBuf::from(raw);
        if p.is_relative() && *source == Source::File {
            if let Some(dir) = &self.config_dir {
                return Some(dir.join(p));
            }
        }
        Some(p)
    }

    pub fn required_path(&self, key: &str, needed_for: &str) -> CliResult<PathBuf> {
        self.path(key)
            .ok_or_else(|| CliError::Config(format!("`{key}` must be set for {needed_for}")))
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        let raw = self
            .get(key)
            .ok_or_else(|| CliError::Config(format!("`{key}` is not set")))?;
        raw.parse::<T>()
            .map_err(|e| CliError::Config(format!("bad value for `{key}`: {e}")))
    }

    pub fn parse_opt<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(_) => self.parse(key).map(Some),
        }
    }

    pub fn bool(&self, key: &str) -> CliResult<bool> {
        match self.get(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(other) => Err(CliError::Config(format!(
                "bad value for `{key}`: `{other}` is not a boolean"
            ))),
        }
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.get(key)
            .map(|s| {
                s.split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(String::from)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// The fully resolved configuration, one key per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, (value, _)) in &self.values {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}
