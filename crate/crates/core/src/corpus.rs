//! Corpus ingestion: motions, speeches, topic-specific claims, raw crowd
//! annotations, word-embedding tables and externally produced score files.
//!
//! All loaders are deterministic, preserve input order, and validate
//! cross-references eagerly so later stages can assume resolved ids.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::text;

/// A loaded value plus non-fatal diagnostics gathered while reading it.
#[derive(Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

impl<T> Loaded<T> {
    pub fn new(value: T) -> Self {
        Loaded {
            value,
            warnings: Vec::new(),
        }
    }
}

/// A debate motion: a simplified resolution carrying an explicit topic and
/// suggested action ("We should introduce goal line technology").
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Motion {
    pub motion_id: String,
    pub text: String,
    pub topic: String,
    pub action: String,
}

/// The side a speaker argues: for or against the motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stance {
    Pro,
    Con,
}

impl FromStr for Stance {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pro" => Ok(Stance::Pro),
            "con" => Ok(Stance::Con),
            other => Err(format!("stance must be `pro` or `con`, got `{other}`")),
        }
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stance::Pro => "pro",
            Stance::Con => "con",
        })
    }
}

/// One recorded speech, already split into sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Speech {
    pub speech_id: String,
    pub motion_id: String,
    pub stance: Stance,
    pub speaker_id: String,
    pub sentences: Vec<String>,
}

/// A topic-specific claim with an optional multi-sentence description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdebateClaim {
    pub claim_id: String,
    pub motion_id: String,
    pub text: String,
    pub detailed_description: Option<String>,
}

/// The four crowd-annotation tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Relevance,
    SpeechMention,
    SentenceMention,
    RebuttalPlausibility,
}

impl Task {
    pub const ALL: [Task; 4] = [
        Task::Relevance,
        Task::SpeechMention,
        Task::SentenceMention,
        Task::RebuttalPlausibility,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Relevance => "relevance",
            Task::SpeechMention => "speech_mention",
            Task::SentenceMention => "sentence_mention",
            Task::RebuttalPlausibility => "rebuttal_plausibility",
        }
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "relevance" => Ok(Task::Relevance),
            "speech_mention" => Ok(Task::SpeechMention),
            "sentence_mention" => Ok(Task::SentenceMention),
            "rebuttal_plausibility" => Ok(Task::RebuttalPlausibility),
            other => Err(format!("unknown task `{other}`")),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelevanceLabel {
    Support,
    Oppose,
    NotRelevant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeechMentionLabel {
    Explicit,
    Implicit,
    NotMentioned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SentenceMentionLabel {
    Mentioned,
    NotMentioned,
}

/// Combined two-step answer for the rebuttal-plausibility task: whether the
/// claim is mentioned and, if so, whether the canned rebuttal is plausible.
/// The encoding makes a step-2 answer without a step-1 mention
/// unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlausibilityLabel {
    MentionedAndPlausible,
    MentionedNotPlausible,
    NotMentioned,
}

/// One annotator's answer, typed by task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Relevance(RelevanceLabel),
    SpeechMention(SpeechMentionLabel),
    SentenceMention(SentenceMentionLabel),
    Plausibility(PlausibilityLabel),
}

impl Answer {
    pub fn parse(task: Task, s: &str) -> std::result::Result<Answer, String> {
        let err = |task: Task, s: &str| {
            format!(
                "answer `{s}` is not in the label set of task `{task}`",
                task = task.as_str()
            )
        };
        match task {
            Task::Relevance => match s {
                "support" => Ok(Answer::Relevance(RelevanceLabel::Support)),
                "oppose" => Ok(Answer::Relevance(RelevanceLabel::Oppose)),
                "not_relevant" => Ok(Answer::Relevance(RelevanceLabel::NotRelevant)),
                _ => Err(err(task, s)),
            },
            Task::SpeechMention => match s {
                "explicit" => Ok(Answer::SpeechMention(SpeechMentionLabel::Explicit)),
                "implicit" => Ok(Answer::SpeechMention(SpeechMentionLabel::Implicit)),
                "not_mentioned" => Ok(Answer::SpeechMention(SpeechMentionLabel::NotMentioned)),
                _ => Err(err(task, s)),
            },
            Task::SentenceMention => match s {
                "mentioned" => Ok(Answer::SentenceMention(SentenceMentionLabel::Mentioned)),
                "not_mentioned" => Ok(Answer::SentenceMention(SentenceMentionLabel::NotMentioned)),
                _ => Err(err(task, s)),
            },
            Task::RebuttalPlausibility => match s {
                "mentioned_and_plausible" => Ok(Answer::Plausibility(
                    PlausibilityLabel::MentionedAndPlausible,
                )),
                "mentioned_not_plausible" => Ok(Answer::Plausibility(
                    PlausibilityLabel::MentionedNotPlausible,
                )),
                "not_mentioned" => Ok(Answer::Plausibility(PlausibilityLabel::NotMentioned)),
                _ => Err(err(task, s)),
            },
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Answer::Relevance(RelevanceLabel::Support) => "support",
            Answer::Relevance(RelevanceLabel::Oppose) => "oppose",
            Answer::Relevance(RelevanceLabel::NotRelevant) => "not_relevant",
            Answer::SpeechMention(SpeechMentionLabel::Explicit) => "explicit",
            Answer::SpeechMention(SpeechMentionLabel::Implicit) => "implicit",
            Answer::SpeechMention(SpeechMentionLabel::NotMentioned) => "not_mentioned",
            Answer::SentenceMention(SentenceMentionLabel::Mentioned) => "mentioned",
            Answer::SentenceMention(SentenceMentionLabel::NotMentioned) => "not_mentioned",
            Answer::Plausibility(PlausibilityLabel::MentionedAndPlausible) => {
                "mentioned_and_plausible"
            }
            Answer::Plausibility(PlausibilityLabel::MentionedNotPlausible) => {
                "mentioned_not_plausible"
            }
            Answer::Plausibility(PlausibilityLabel::NotMentioned) => "not_mentioned",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Composite item key: the claim plus a task-specific target (motion id,
/// speech id or sentence key), serialized as `claim_id|target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ItemKey {
    pub claim_id: String,
    pub target_id: String,
}

impl ItemKey {
    pub fn new(claim_id: impl Into<String>, target_id: impl Into<String>) -> Self {
        ItemKey {
            claim_id: claim_id.into(),
            target_id: target_id.into(),
        }
    }

    pub fn parse(raw: &str) -> std::result::Result<Self, String> {
        match raw.split_once('|') {
            Some((claim, target)) if !claim.is_empty() && !target.is_empty() => {
                Ok(ItemKey::new(claim, target))
            }
            _ => Err(format!(
                "item key `{raw}` is not of the form `claim_id|target`"
            )),
        }
    }

    pub fn raw(&self) -> String {
        format!("{}|{}", self.claim_id, self.target_id)
    }
}

impl fmt::Display for ItemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.claim_id, self.target_id)
    }
}

/// Key of one sentence within a speech, serialized as `speech_id#index`.
pub fn sentence_key(speech_id: &str, index: usize) -> String {
    format!("{speech_id}#{index}")
}

/// Inverse of [`sentence_key`].
pub fn parse_sentence_key(key: &str) -> std::result::Result<(String, usize), String> {
    match key.rsplit_once('#') {
        Some((speech, idx)) => idx
            .parse::<usize>()
            .map(|i| (speech.to_string(), i))
            .map_err(|_| format!("sentence key `{key}` has a non-numeric index")),
        None => Err(format!(
            "sentence key `{key}` is not of the form `speech_id#index`"
        )),
    }
}

/// One raw crowd answer, possibly a known-answer audit question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotationRecord {
    pub task: Task,
    pub item_key: ItemKey,
    pub annotator_id: String,
    pub answer: Answer,
    pub is_probe: bool,
    pub gold_answer: Option<Answer>,
}

/// Token-indexed word vectors of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Self {
        EmbeddingTable {
            dimension,
            vectors: HashMap::new(),
        }
    }

    /// Build a table from `(token, vector)` pairs; panics on dimension
    /// mismatch (intended for tests and programmatic construction).
    pub fn from_pairs<I, S>(dimension: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut table = EmbeddingTable::new(dimension);
        for (token, vector) in pairs {
            assert_eq!(vector.len(), dimension, "vector dimension mismatch");
            table.vectors.insert(token.into(), vector);
        }
        table
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(|v| v.as_slice())
    }
}

/// Scores produced outside this workbench, keyed by claim and target
/// (speech id or sentence key).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExternalScoreFile {
    entries: std::collections::BTreeMap<(String, String), f64>,
}

impl ExternalScoreFile {
    pub fn get(&self, claim_id: &str, target_key: &str) -> Option<f64> {
        self.entries
            .get(&(claim_id.to_string(), target_key.to_string()))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, String), &f64)> {
        self.entries.iter()
    }

    pub fn insert(&mut self, claim_id: impl Into<String>, target: impl Into<String>, score: f64) {
        self.entries.insert((claim_id.into(), target.into()), score);
    }
}

fn open_csv(path: &Path, expected_header: &[&str]) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::schema(path, 1, e.to_string()))?;
    let found: Vec<&str> = headers.iter().collect();
    if found != expected_header {
        return Err(Error::Header {
            path: path.to_path_buf(),
            expected: expected_header.join(","),
            found: found.join(","),
        });
    }
    Ok(reader)
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Malformed-row errors keep the line the parser reached.
pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::schema(path, line, e.to_string())
}

fn field<'a>(
    path: &Path,
    record: &'a csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<&'a str> {
    record
        .get(idx)
        .ok_or_else(|| Error::schema(path, record_line(record), format!("missing field `{name}`")))
}

/// Load motions from `motion_id,text,topic,action`. A topic that does not
/// occur in the motion text yields a warning, not an error.
pub fn load_motions(path: impl AsRef<Path>) -> Result<Loaded<Vec<Motion>>> {
    let path = path.as_ref();
    let mut reader = open_csv(path, &["motion_id", "text", "topic", "action"])?;
    let mut motions = Vec::new();
    let mut warnings = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for row in reader.records() {
        let record = row.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        let motion_id = field(path, &record, 0, "motion_id")?.to_string();
        let text = field(path, &record, 1, "text")?.to_string();
        let topic = field(path, &record, 2, "topic")?.to_string();
        let action = field(path, &record, 3, "action")?.to_string();
        if motion_id.is_empty() {
            return Err(Error::schema(path, line, "empty motion_id"));
        }
        if !seen.insert(motion_id.clone()) {
            return Err(Error::Duplicate {
                path: path.to_path_buf(),
                line,
                what: "motion_id".into(),
                id: motion_id,
            });
        }
        if topic.trim().is_empty() {
            return Err(Error::schema(
                path,
                line,
                format!("motion `{motion_id}` has an empty topic"),
            ));
        }
        if !text.contains(&topic) {
            warnings.push(format!(
                "{}:{line}: motion `{motion_id}` text does not contain its topic `{topic}`",
                path.display()
            ));
        }
        motions.push(Motion {
            motion_id,
            text,
            topic,
            action,
        });
    }
    Ok(Loaded {
        value: motions,
        warnings,
    })
}

/// Load speeches from `speech_id,motion_id,stance,speaker_id,transcript_path`.
/// Transcript paths resolve relative to the CSV's directory; transcripts are
/// sentence-split on load.
pub fn load_speeches(path: impl AsRef<Path>, motions: &[Motion]) -> Result<Loaded<Vec<Speech>>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let known: HashSet<&str> = motions.iter().map(|m| m.motion_id.as_str()).collect();
    let mut reader = open_csv(
        path,
        &[
            "speech_id",
            "motion_id",
            "stance",
            "speaker_id",
            "transcript_path",
        ],
    )?;
    let mut speeches = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for row in reader.records() {
        let record = row.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        let speech_id = field(path, &record, 0, "speech_id")?.to_string();
        let motion_id = field(path, &record, 1, "motion_id")?.to_string();
        let stance_raw = field(path, &record, 2, "stance")?;
        let speaker_id = field(path, &record, 3, "speaker_id")?.to_string();
        let transcript_rel = field(path, &record, 4, "transcript_path")?;
        if !seen.insert(speech_id.clone()) {
            return Err(Error::Duplicate {
                path: path.to_path_buf(),
                line,
                what: "speech_id".into(),
                id: speech_id,
            });
        }
        if !known.contains(motion_id.as_str()) {
            return Err(Error::DanglingReference {
                path: path.to_path_buf(),
                line,
                kind: "motion_id".into(),
                id: motion_id,
            });
        }
        let stance: Stance = stance_raw
            .parse()
            .map_err(|e: String| Error::schema(path, line, e))?;
        let transcript_path: PathBuf = base.join(transcript_rel);
        let transcript =
            fs::read_to_string(&transcript_path).map_err(|e| Error::io(&transcript_path, e))?;
        let sentences = text::split_sentences(&transcript);
        if sentences.is_empty() {
            return Err(Error::schema(
                path,
                line,
                format!("speech `{speech_id}` transcript contains no sentences"),
            ));
        }
        speeches.push(Speech {
            speech_id,
            motion_id,
            stance,
            speaker_id,
            sentences,
        });
    }
    Ok(Loaded::new(speeches))
}

/// Load topic-specific claims from
/// `claim_id,motion_id,text,detailed_description`.
pub fn load_idebate_claims(
    path: impl AsRef<Path>,
    motions: &[Motion],
) -> Result<Loaded<Vec<IdebateClaim>>> {
    let path = path.as_ref();
    let known: HashSet<&str> = motions.iter().map(|m| m.motion_id.as_str()).collect();
    let mut reader = open_csv(
        path,
        &["claim_id", "motion_id", "text", "detailed_description"],
    )?;
    let mut claims = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for row in reader.records() {
        let record = row.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        let claim_id = field(path, &record, 0, "claim_id")?.to_string();
        let motion_id = field(path, &record, 1, "motion_id")?.to_string();
        let text = field(path, &record, 2, "text")?.to_string();
        let description = field(path, &record, 3, "detailed_description")?
            .trim()
            .to_string();
        if !seen.insert(claim_id.clone()) {
            return Err(Error::Duplicate {
                path: path.to_path_buf(),
                line,
                what: "claim_id".into(),
                id: claim_id,
            });
        }
        if !known.contains(motion_id.as_str()) {
            return Err(Error::DanglingReference {
                path: path.to_path_buf(),
                line,
                kind: "motion_id".into(),
                id: motion_id,
            });
        }
        claims.push(IdebateClaim {
            claim_id,
            motion_id,
            text,
            detailed_description: if description.is_empty() {
                None
            } else {
                Some(description)
            },
        });
    }
    Ok(Loaded::new(claims))
}

fn parse_bool(path: &Path, line: u64, s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" | "" => Ok(false),
        other => Err(Error::schema(
            path,
            line,
            format!("`{other}` is not a boolean (use true/false)"),
        )),
    }
}

/// Load raw crowd answers from
/// `task,item_key,annotator_id,answer,is_probe,gold_answer`.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Loaded<Vec<AnnotationRecord>>> {
    let path = path.as_ref();
    let mut reader = open_csv(
        path,
        &[
            "task",
            "item_key",
            "annotator_id",
            "answer",
            "is_probe",
            "gold_answer",
        ],
    )?;
    let mut records = Vec::new();
    for row in reader.records() {
        let record = row.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        let task: Task = field(path, &record, 0, "task")?
            .parse()
            .map_err(|e: String| Error::schema(path, line, e))?;
        let item_key = ItemKey::parse(field(path, &record, 1, "item_key")?)
            .map_err(|e| Error::schema(path, line, e))?;
        let annotator_id = field(path, &record, 2, "annotator_id")?.to_string();
        if annotator_id.is_empty() {
            return Err(Error::schema(path, line, "empty annotator_id"));
        }
        let answer = Answer::parse(task, field(path, &record, 3, "answer")?)
            .map_err(|e| Error::schema(path, line, e))?;
        let is_probe = parse_bool(path, line, field(path, &record, 4, "is_probe")?)?;
        let gold_raw = field(path, &record, 5, "gold_answer")?;
        let gold_answer = if gold_raw.is_empty() {
            None
        } else {
            Some(Answer::parse(task, gold_raw).map_err(|e| Error::schema(path, line, e))?)
        };
        records.push(AnnotationRecord {
            task,
            item_key,
            annotator_id,
            answer,
            is_probe,
            gold_answer,
        });
    }
    Ok(Loaded::new(records))
}

/// Load word vectors in the textual format: an optional `<count> <dim>`
/// header line, then `<token> <f1> ... <fdim>` per line. Duplicate tokens
/// keep the first occurrence with a warning.
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<Loaded<EmbeddingTable>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut warnings = Vec::new();
    let mut dimension: Option<usize> = None;
    let mut vectors: HashMap<String, Vec<f64>> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = (idx + 1) as u64;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if idx == 0 && fields.len() == 2 {
            if let (Ok(_count), Ok(dim)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>())
            {
                dimension = Some(dim);
                continue;
            }
        }
        if fields.len() < 2 {
            return Err(Error::schema(
                path,
                line_no,
                "expected a token and at least one value",
            ));
        }
        let token = fields[0];
        let values: Vec<f64> = fields[1..]
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::schema(path, line_no, format!("bad vector value: {e}")))?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::schema(path, line_no, "non-finite vector value"));
        }
        match dimension {
            None => dimension = Some(values.len()),
            Some(dim) if dim != values.len() => {
                return Err(Error::schema(
                    path,
                    line_no,
                    format!("vector has {} values, expected {dim}", values.len()),
                ));
            }
            Some(_) => {}
        }
        if vectors.contains_key(token) {
            warnings.push(format!(
                "{}:{line_no}: duplicate token `{token}` ignored (first occurrence kept)",
                path.display()
            ));
            continue;
        }
        vectors.insert(token.to_string(), values);
    }
    let table = EmbeddingTable {
        dimension: dimension.unwrap_or(0),
        vectors,
    };
    Ok(Loaded {
        value: table,
        warnings,
    })
}

/// Load externally produced scores from `claim_id,target_key,score`.
pub fn load_external_scores(path: impl AsRef<Path>) -> Result<Loaded<ExternalScoreFile>> {
    let path = path.as_ref();
    let mut reader = open_csv(path, &["claim_id", "target_key", "score"])?;
    let mut scores = ExternalScoreFile::default();
    for row in reader.records() {
        let record = row.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        let claim_id = field(path, &record, 0, "claim_id")?.to_string();
        let target = field(path, &record, 1, "target_key")?.to_string();
        let score: f64 = field(path, &record, 2, "score")?
            .parse()
            .map_err(|e| Error::schema(path, line, format!("bad score: {e}")))?;
        if !score.is_finite() {
            return Err(Error::schema(path, line, "non-finite score"));
        }
        if scores.get(&claim_id, &target).is_some() {
            return Err(Error::Duplicate {
                path: path.to_path_buf(),
                line,
                what: "score key".into(),
                id: format!("{claim_id},{target}"),
            });
        }
        scores.insert(claim_id, target, score);
    }
    Ok(Loaded::new(scores))
}

/// Load a stopword list: one token per line, `#` comments allowed.
pub fn load_stopwords(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect())
}
