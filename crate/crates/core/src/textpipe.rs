//! Raw text to normalized tokens.
//!
//! Steps, in order: character filtering, lowercasing, de-hyphenation,
//! contraction expansion, `an` → `a`, genitive stripping, whitespace
//! tokenization, compound splitting. Each [`Token`] records the byte span it
//! came from and which steps changed it.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::InputError;
use crate::morphology::{Closure, EXTRA_WORDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    CharFilter,
    Lowercase,
    Dehyphenate,
    ContractionExpand,
    AnNormalize,
    GenitiveStrip,
    CompoundSplit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    /// Byte offsets `[start, end)` into the original text.
    pub span: (usize, usize),
    pub trace: Vec<Step>,
}

#[derive(Debug, Clone, Default)]
pub struct ContractionTable {
    map: HashMap<String, Vec<String>>,
}

// Fallbacks for contractions missing from the table.
const SUFFIX_EXPANSIONS: [(&str, &str); 6] = [
    ("n't", "not"),
    ("'re", "are"),
    ("'ll", "will"),
    ("'ve", "have"),
    ("'m", "am"),
    ("'d", "would"),
];

impl ContractionTable {
    /// Parses `contraction<TAB>word word ...` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (from, to) = line.split_once('\t').ok_or_else(|| InputError::Parse {
                line: i + 1,
                message: "expected `contraction<TAB>expansion`".into(),
            })?;
            let words: Vec<String> = to.split_whitespace().map(str::to_lowercase).collect();
            if from.is_empty() || words.is_empty() {
                return Err(InputError::Parse {
                    line: i + 1,
                    message: "empty contraction or expansion".into(),
                });
            }
            map.insert(from.to_lowercase(), words);
        }
        Ok(ContractionTable { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Expands a lowercased word. Table entries win; otherwise the common
    /// suffixes (n't, 're, 'll, 've, 'm, 'd) expand generically. Anything
    /// else, including `'s` outside the table, is returned unchanged.
    pub fn expand(&self, surface: &str) -> Vec<String> {
        if let Some(words) = self.map.get(surface) {
            return words.clone();
        }
        for (suffix, word) in SUFFIX_EXPANSIONS {
            if let Some(stem) = surface.strip_suffix(suffix) {
                if !stem.is_empty() && !stem.contains('\'') {
                    return vec![stem.to_string(), word.to_string()];
                }
            }
        }
        vec![surface.to_string()]
    }
}

/// Splits `surface` into two closure members of at least three characters
/// each, preferring the longest first part. Returns `[surface]` otherwise.
pub fn split_compound(surface: &str, closure: &Closure) -> Vec<String> {
    let bounds: Vec<usize> = surface.char_indices().map(|(i, _)| i).collect();
    let n = bounds.len();
    if n >= 6 {
        for k in (3..=n - 3).rev() {
            let (head, tail) = surface.split_at(bounds[k]);
            if closure.contains(head) && closure.contains(tail) {
                return vec![head.to_string(), tail.to_string()];
            }
        }
    }
    vec![surface.to_string()]
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{2018}' | '\u{02bc}')
}

struct Chunk {
    /// Kept characters with their byte ranges.
    chars: Vec<(usize, usize, char)>,
    filtered: bool,
    newline_after: bool,
}

fn chunks(text: &str) -> Vec<Chunk> {
    let mut out: Vec<Chunk> = Vec::new();
    let mut cur: Option<Chunk> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(chunk) = cur.take() {
                out.push(chunk);
            }
            if c == '\n' {
                if let Some(last) = out.last_mut() {
                    last.newline_after = true;
                }
            }
            continue;
        }
        let chunk = cur.get_or_insert_with(|| Chunk {
            chars: Vec::new(),
            filtered: false,
            newline_after: false,
        });
        let end = i + c.len_utf8();
        if c.is_alphabetic() || c == '-' {
            chunk.chars.push((i, end, c));
        } else if is_apostrophe(c) {
            chunk.chars.push((i, end, '\''));
            chunk.filtered |= c != '\'';
        } else {
            chunk.filtered = true;
        }
    }
    out.extend(cur);

    // re-join words hyphenated across a line break
    let mut joined: Vec<Chunk> = Vec::with_capacity(out.len());
    for chunk in out {
        match joined.last_mut() {
            Some(prev)
                if prev.newline_after
                    && prev.chars.last().is_some_and(|c| c.2 == '-')
                    && chunk.chars.first().is_some_and(|c| c.2.is_alphabetic()) =>
            {
                prev.chars.extend(chunk.chars);
                prev.filtered |= chunk.filtered;
                prev.newline_after = chunk.newline_after;
            }
            _ => joined.push(chunk),
        }
    }
    joined
}

fn strip_genitive(word: &str) -> String {
    let word = word.trim_end_matches('\'');
    let word = word.strip_suffix("'s").unwrap_or(word);
    word.replace('\'', "")
}

/// Runs the full pipeline over `text`.
pub fn normalize_and_tokenize(text: &str, contractions: &ContractionTable, closure: &Closure) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in chunks(text) {
        let (Some(first), Some(last)) = (chunk.chars.first(), chunk.chars.last()) else {
            continue;
        };
        let span = (first.0, last.1);
        let mut trace = Vec::new();
        if chunk.filtered {
            trace.push(Step::CharFilter);
        }
        let raw: String = chunk.chars.iter().map(|c| c.2).collect();
        let lower = raw.to_lowercase();
        if lower != raw {
            trace.push(Step::Lowercase);
        }
        let dehyphenated: String = lower.chars().filter(|c| *c != '-').collect();
        if dehyphenated != lower {
            trace.push(Step::Dehyphenate);
        }
        // surrounding single quotes are quotation marks; a trailing one may be
        // a plural genitive and is left for genitive stripping
        let word = dehyphenated.trim_start_matches('\'');
        if word.len() != dehyphenated.len() && !trace.contains(&Step::CharFilter) {
            trace.insert(0, Step::CharFilter);
        }
        if word.is_empty() {
            continue;
        }
        let expanded = contractions.expand(word);
        if expanded.len() != 1 || expanded[0] != word {
            trace.push(Step::ContractionExpand);
        }
        for part in expanded {
            let mut steps = trace.clone();
            let part = if part == "an" {
                steps.push(Step::AnNormalize);
                "a".to_string()
            } else {
                part
            };
            let stripped = strip_genitive(&part);
            if stripped != part {
                steps.push(Step::GenitiveStrip);
            }
            if stripped.is_empty() {
                continue;
            }
            if closure.contains(&stripped) || EXTRA_WORDS.contains(&stripped.as_str()) {
                tokens.push(Token {
                    surface: stripped,
                    span,
                    trace: steps,
                });
                continue;
            }
            let pieces = split_compound(&stripped, closure);
            if pieces.len() > 1 {
                steps.push(Step::CompoundSplit);
            }
            for piece in pieces {
                tokens.push(Token {
                    surface: piece,
                    span,
                    trace: steps.clone(),
                });
            }
        }
    }
    tokens
}

/// As [`normalize_and_tokenize`], for input that may not be valid UTF-8.
pub fn normalize_bytes(
    bytes: &[u8],
    contractions: &ContractionTable,
    closure: &Closure,
) -> Result<Vec<Token>, InputError> {
    let text = std::str::from_utf8(bytes).map_err(|e| InputError::InvalidUtf8(e.valid_up_to()))?;
    Ok(normalize_and_tokenize(text, contractions, closure))
}

/// Joins token surfaces with single spaces.
pub fn join(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
