//! Tokenization and sentence splitting shared by every module.
//!
//! The tokenizer lower-cases and segments on Unicode word boundaries,
//! dropping punctuation. The sentence splitter breaks on `.?!` followed by
//! whitespace and a capital letter, with an abbreviation list suppressing
//! false boundaries.

use unicode_segmentation::UnicodeSegmentation;

/// Abbreviations that never terminate a sentence. Compared case-insensitively
/// against the word preceding a period.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "e.g", "i.e", "cf", "al",
    "inc", "ltd", "co", "corp", "no", "fig", "approx",
];

/// Lower-cased Unicode word segmentation. Punctuation is dropped and
/// hyphenated compounds split into their parts.
pub fn tokenize(text: &str) -> Vec<String> {
    text.unicode_words().map(|w| w.to_lowercase()).collect()
}

/// Split `text` into sentences on `.?!` runs followed by whitespace and an
/// upper-case letter. Returns trimmed sentences; the concatenation of the
/// output differs from the input only in boundary whitespace.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize; // byte offset of current sentence start
    let mut i = 0usize;

    while i < chars.len() {
        let (_, c) = chars[i];
        if is_terminator(c) {
            // Consume the whole terminator run ("...", "?!").
            let mut run_end = i;
            while run_end + 1 < chars.len() && is_terminator(chars[run_end + 1].1) {
                run_end += 1;
            }
            if boundary_after(&chars, i, run_end) {
                let end_byte = byte_end(&chars, run_end, text.len());
                push_sentence(text, start, end_byte, &mut sentences);
                // Advance past the whitespace to the next sentence start.
                let mut next = run_end + 1;
                while next < chars.len() && chars[next].1.is_whitespace() {
                    next += 1;
                }
                start = chars[next].0;
                i = next;
                continue;
            }
            i = run_end + 1;
            continue;
        }
        i += 1;
    }
    push_sentence(text, start, text.len(), &mut sentences);
    sentences
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn byte_end(chars: &[(usize, char)], idx: usize, text_len: usize) -> usize {
    chars.get(idx + 1).map(|&(b, _)| b).unwrap_or(text_len)
}

fn push_sentence(text: &str, start: usize, end: usize, out: &mut Vec<String>) {
    let s = text[start..end].trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}

/// True when the terminator run ending at `run_end` is a real sentence
/// boundary: whitespace then a capital follows, and the preceding word is
/// not a known abbreviation or a single initial.
fn boundary_after(chars: &[(usize, char)], run_start: usize, run_end: usize) -> bool {
    let mut j = run_end + 1;
    if j >= chars.len() || !chars[j].1.is_whitespace() {
        return false;
    }
    while j < chars.len() && chars[j].1.is_whitespace() {
        j += 1;
    }
    if j >= chars.len() || !chars[j].1.is_uppercase() {
        return false;
    }
    // Abbreviation suppression applies to a lone period only.
    if run_start == run_end && chars[run_start].1 == '.' {
        let word = preceding_word(chars, run_start);
        if !word.is_empty() {
            let lower = word.to_lowercase();
            if ABBREVIATIONS.contains(&lower.as_str()) {
                return false;
            }
            // Single-letter initials such as "J. Smith".
            if word.chars().count() == 1 && word.chars().all(|c| c.is_alphabetic()) {
                return false;
            }
        }
    }
    true
}

/// The word immediately before position `idx`, scanning back over letters
/// and interior dots (so "e.g" is recovered from "e.g.").
fn preceding_word(chars: &[(usize, char)], idx: usize) -> String {
    let mut k = idx;
    let mut collected: Vec<char> = Vec::new();
    while k > 0 {
        let c = chars[k - 1].1;
        if c.is_alphabetic() || (c == '.' && !collected.is_empty()) {
            collected.push(c);
            k -= 1;
        } else {
            break;
        }
    }
    collected.reverse();
    let word: String = collected.into_iter().collect();
    word.trim_matches('.').to_string()
}
