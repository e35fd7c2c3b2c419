//! Small helpers shared by the unit tests.

use crate::corpus::{AnnotationRecord, Answer, ItemKey, Motion, Speech, Stance, Task};

/// Deterministic xorshift generator so randomized tests are reproducible
/// without an RNG dependency.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

pub fn record(task: Task, item: &str, annotator: &str, answer: &str) -> AnnotationRecord {
    AnnotationRecord {
        task,
        item_key: ItemKey::parse(item).unwrap(),
        annotator_id: annotator.to_string(),
        answer: Answer::parse(task, answer).unwrap(),
        is_probe: false,
        gold_answer: None,
    }
}

/// Records for one item with the given per-label vote counts; annotators
/// are numbered.
pub fn votes(task: Task, item: &str, counts: &[(&str, usize)]) -> Vec<AnnotationRecord> {
    let mut records = Vec::new();
    let mut annotator = 0usize;
    for (label, count) in counts {
        for _ in 0..*count {
            records.push(record(task, item, &format!("a{annotator}"), label));
            annotator += 1;
        }
    }
    records
}

pub fn motion(id: &str, topic: &str, action: &str) -> Motion {
    Motion {
        motion_id: id.to_string(),
        text: format!("We should {action} {topic}"),
        topic: topic.to_string(),
        action: action.to_string(),
    }
}

pub fn speech(id: &str, motion_id: &str, stance: Stance, sentences: &[&str]) -> Speech {
    Speech {
        speech_id: id.to_string(),
        motion_id: motion_id.to_string(),
        stance,
        speaker_id: format!("speaker-{id}"),
        sentences: sentences.iter().map(|s| s.to_string()).collect(),
    }
}
