use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::registry::Registry;
use crate::tokenize::PUNCTUATION;

pub const DEFAULT_MAX_CHARS: usize = 250;
pub const TERMINATORS: [char; 3] = ['.', '?', '!'];

/// One sentence bound for the speech backend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthesisRequest {
    pub text: String,
    pub request_id: String,
}

impl SynthesisRequest {
    pub fn new(text: impl Into<String>) -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(0);
        SynthesisRequest {
            text: text.into(),
            request_id: format!("req-{:06}", NEXT.fetch_add(1, Ordering::Relaxed)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("no text to synthesize")]
    EmptyInput,
    #[error("character `{ch}` at {position} is outside the Kazakh input alphabet")]
    OutsideAlphabet { ch: char, position: usize },
    #[error("maximum sentence length must be at least 2, got {0}")]
    LimitTooSmall(usize),
}

fn ends_with_terminator(s: &str) -> bool {
    s.ends_with(TERMINATORS)
}

/// Splits closed Kazakh text into bounded, terminated sentences.
#[derive(Clone, Debug)]
pub struct SentenceSplitter {
    letters: BTreeSet<char>,
    max_chars: usize,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        SentenceSplitter::new(Registry::embedded())
    }
}

/// [`SentenceSplitter`] with the embedded alphabet and default length limit.
pub fn split_sentences(text: &str) -> Result<Vec<SynthesisRequest>, SplitError> {
    SentenceSplitter::default().split(text)
}

impl SentenceSplitter {
    pub fn new(registry: &Registry) -> Self {
        SentenceSplitter {
            letters: registry.kazakh_letters(),
            max_chars: DEFAULT_MAX_CHARS,
        }
    }

    pub fn with_max_chars(mut self, max_chars: usize) -> Self {
        self.max_chars = max_chars;
        self
    }

    pub fn max_chars(&self) -> usize {
        self.max_chars
    }

    /// Whether `text` is a valid request body: closed alphabet, bounded, terminated.
    pub fn is_valid_request(&self, text: &str) -> bool {
        text.chars().count() <= self.max_chars
            && ends_with_terminator(text)
            && text
                .chars()
                .all(|c| self.letters.contains(&c) || PUNCTUATION.contains(&c) || c == ' ')
    }

    pub fn split(&self, text: &str) -> Result<Vec<SynthesisRequest>, SplitError> {
        if self.max_chars < 2 {
            return Err(SplitError::LimitTooSmall(self.max_chars));
        }
        if let Some((position, ch)) = text
            .chars()
            .enumerate()
            .find(|(_, c)| !(self.letters.contains(c) || PUNCTUATION.contains(c) || c.is_whitespace()))
        {
            return Err(SplitError::OutsideAlphabet { ch, position });
        }

        let mut sentences: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            current.push(c);
            if TERMINATORS.contains(&c) && !chars.peek().is_some_and(|n| TERMINATORS.contains(n)) {
                sentences.push(std::mem::take(&mut current));
            }
        }
        sentences.push(current);

        // Collapse whitespace and fold letterless fragments into a neighbour.
        let mut merged: Vec<String> = Vec::new();
        let mut pending = String::new();
        for s in sentences {
            let s = s.split_whitespace().collect::<Vec<_>>().join(" ");
            if s.is_empty() {
                continue;
            }
            if s.chars().any(|c| self.letters.contains(&c)) {
                let s = if pending.is_empty() {
                    s
                } else {
                    format!("{} {s}", std::mem::take(&mut pending))
                };
                merged.push(s);
            } else if let Some(last) = merged.last_mut() {
                last.push(' ');
                last.push_str(&s);
            } else {
                if !pending.is_empty() {
                    pending.push(' ');
                }
                pending.push_str(&s);
            }
        }
        if merged.is_empty() {
            return Err(SplitError::EmptyInput);
        }

        let mut out = Vec::new();
        for s in merged {
            for mut fragment in self.split_long(&s) {
                if !ends_with_terminator(&fragment) {
                    fragment.push('.');
                }
                out.push(SynthesisRequest::new(fragment));
            }
        }
        Ok(out)
    }

    /// Cuts a sentence into pieces that fit the limit once re-terminated:
    /// after the last comma that fits, else at the last space, else hard.
    fn split_long(&self, sentence: &str) -> Vec<String> {
        let mut pieces = Vec::new();
        let mut rest: Vec<char> = sentence.chars().collect();
        loop {
            let needs_terminator = !rest.last().is_some_and(|c| TERMINATORS.contains(c));
            if rest.len() + usize::from(needs_terminator) <= self.max_chars {
                break;
            }
            // Every cut piece loses its terminator, so leave room for one.
            let window = &rest[..self.max_chars - 1];
            let (head_end, tail_start) = if TERMINATORS.contains(&rest[self.max_chars - 1]) {
                // A terminator right at the limit stays with its sentence.
                (self.max_chars, self.max_chars)
            } else if let Some(p) = window.iter().rposition(|c| *c == ',').filter(|p| *p > 0) {
                (p + 1, p + 1)
            } else if let Some(p) = window.iter().rposition(|c| *c == ' ').filter(|p| *p > 0) {
                (p, p + 1)
            } else {
                (window.len(), window.len())
            };
            let head: String = rest[..head_end].iter().collect();
            pieces.push(head.trim_end().to_string());
            rest.drain(..tail_start);
            while rest.first() == Some(&' ') {
                rest.remove(0);
            }
        }
        if !rest.is_empty() {
            pieces.push(rest.into_iter().collect());
        }
        pieces
    }
}
