//! The word list: one entry per listed surface, each with a part-of-speech
//! set and the irregular forms attached to it.
//!
//! Word-list files hold one entry per line,
//! `surface<TAB>pos1,pos2[<TAB>kind:form,kind:form]`, and irregular-form
//! tables hold `root<TAB>kind<TAB>form`. In both, `#` starts a comment line.
//! A [`WordList`] is immutable once loaded.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::LexiconError;
use crate::morphology::orthography::{apply_suffix, Suffix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    Determiner,
    Preposition,
    Conjunction,
    Interjection,
    Number,
}

impl Pos {
    pub const ALL: [Pos; 10] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Adjective,
        Pos::Adverb,
        Pos::Pronoun,
        Pos::Determiner,
        Pos::Preposition,
        Pos::Conjunction,
        Pos::Interjection,
        Pos::Number,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Pronoun => "pronoun",
            Pos::Determiner => "determiner",
            Pos::Preposition => "preposition",
            Pos::Conjunction => "conjunction",
            Pos::Interjection => "interjection",
            Pos::Number => "number",
        }
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown part of speech `{s}`"))
    }
}

/// A small set of parts of speech.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosSet(u16);

impl PosSet {
    pub fn insert(&mut self, pos: Pos) {
        self.0 |= 1 << pos as u16;
    }

    pub fn contains(self, pos: Pos) -> bool {
        self.0 & (1 << pos as u16) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Pos> {
        Pos::ALL.into_iter().filter(move |p| self.contains(*p))
    }
}

impl FromIterator<Pos> for PosSet {
    fn from_iter<I: IntoIterator<Item = Pos>>(iter: I) -> Self {
        let mut set = PosSet::default();
        for pos in iter {
            set.insert(pos);
        }
        set
    }
}

impl fmt::Display for PosSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for pos in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str(pos.as_str())?;
        }
        Ok(())
    }
}

impl Serialize for PosSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// What relation an irregular form has to its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrregularKind {
    Past,
    PastParticiple,
    PresentParticiple,
    ThirdSingular,
    /// Other present-tense forms (am, are).
    Present,
    Plural,
    Comparative,
    Superlative,
    PronounVariant,
    NounVerbPair,
    BaseFormPair,
    Acronym,
    FulAdjective,
}

impl IrregularKind {
    pub const ALL: [IrregularKind; 13] = [
        IrregularKind::Past,
        IrregularKind::PastParticiple,
        IrregularKind::PresentParticiple,
        IrregularKind::ThirdSingular,
        IrregularKind::Present,
        IrregularKind::Plural,
        IrregularKind::Comparative,
        IrregularKind::Superlative,
        IrregularKind::PronounVariant,
        IrregularKind::NounVerbPair,
        IrregularKind::BaseFormPair,
        IrregularKind::Acronym,
        IrregularKind::FulAdjective,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IrregularKind::Past => "past",
            IrregularKind::PastParticiple => "past-participle",
            IrregularKind::PresentParticiple => "present-participle",
            IrregularKind::ThirdSingular => "third-singular",
            IrregularKind::Present => "present",
            IrregularKind::Plural => "plural",
            IrregularKind::Comparative => "comparative",
            IrregularKind::Superlative => "superlative",
            IrregularKind::PronounVariant => "pronoun-variant",
            IrregularKind::NounVerbPair => "noun-verb-pair",
            IrregularKind::BaseFormPair => "base-form-pair",
            IrregularKind::Acronym => "acronym",
            IrregularKind::FulAdjective => "ful-adjective",
        }
    }

    /// The regular suffix this kind replaces, for inflectional kinds.
    pub fn regular_suffix(self) -> Option<Suffix> {
        match self {
            IrregularKind::Past | IrregularKind::PastParticiple => Some(Suffix::Ed),
            IrregularKind::PresentParticiple => Some(Suffix::Ing),
            IrregularKind::ThirdSingular | IrregularKind::Plural => Some(Suffix::S),
            IrregularKind::Comparative => Some(Suffix::Er),
            IrregularKind::Superlative => Some(Suffix::Est),
            _ => None,
        }
    }
}

impl FromStr for IrregularKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IrregularKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown irregular-form kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Inline,
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrregularForm {
    pub kind: IrregularKind,
    pub form: String,
    #[serde(skip)]
    origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lexeme {
    surface: String,
    pos: PosSet,
    irregular: Vec<IrregularForm>,
}

impl Lexeme {
    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn pos(&self) -> PosSet {
        self.pos
    }

    pub fn has_pos(&self, pos: Pos) -> bool {
        self.pos.contains(pos)
    }

    pub fn irregular(&self) -> &[IrregularForm] {
        &self.irregular
    }

    pub fn irregular_of(&self, kind: IrregularKind) -> impl Iterator<Item = &str> {
        self.irregular
            .iter()
            .filter(move |i| i.kind == kind)
            .map(|i| i.form.as_str())
    }

    pub fn has_irregular(&self, kind: IrregularKind) -> bool {
        self.irregular.iter().any(|i| i.kind == kind)
    }
}

/// Lines of the source file that are not entries, kept for re-serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Layout {
    Entry(usize),
    Verbatim(String),
}

#[derive(Debug, Clone, Default)]
pub struct WordList {
    entries: Vec<Lexeme>,
    index: HashMap<String, usize>,
    layout: Vec<Layout>,
}

fn valid_surface(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| (c.is_alphabetic() && !c.is_uppercase()) || c == '-' || c == '\'')
}

fn parse_error(line: usize, message: impl Into<String>) -> LexiconError {
    LexiconError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_form(line: usize, form: &str) -> Result<String, LexiconError> {
    if valid_surface(form) {
        Ok(form.to_string())
    } else {
        Err(parse_error(line, format!("invalid form `{form}`")))
    }
}

impl WordList {
    /// Parses a word-list file. Irregular tables are attached separately with
    /// [`WordList::attach_irregular`].
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut list = WordList::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                list.layout.push(Layout::Verbatim(line.to_string()));
                continue;
            }
            let mut fields = line.split('\t');
            let surface = fields.next().unwrap_or_default();
            if !valid_surface(surface) {
                return Err(parse_error(line_no, format!("invalid surface `{surface}`")));
            }
            let pos_field = fields
                .next()
                .ok_or_else(|| parse_error(line_no, "missing part-of-speech column"))?;
            let mut pos = PosSet::default();
            for tag in pos_field.split(',') {
                pos.insert(tag.trim().parse().map_err(|e| parse_error(line_no, e))?);
            }
            if pos.is_empty() {
                return Err(parse_error(line_no, "empty part-of-speech set"));
            }
            let mut irregular = Vec::new();
            if let Some(spec) = fields.next().filter(|s| !s.is_empty()) {
                for item in spec.split(',') {
                    let (kind, form) = item
                        .split_once(':')
                        .ok_or_else(|| parse_error(line_no, format!("bad irregular spec `{item}`")))?;
                    irregular.push(IrregularForm {
                        kind: kind.parse().map_err(|e| parse_error(line_no, e))?,
                        form: parse_form(line_no, form)?,
                        origin: Origin::Inline,
                    });
                }
            }
            if fields.next().is_some() {
                return Err(parse_error(line_no, "too many columns"));
            }
            if list.index.contains_key(surface) {
                return Err(LexiconError::Duplicate {
                    line: line_no,
                    surface: surface.to_string(),
                });
            }
            let idx = list.entries.len();
            list.index.insert(surface.to_string(), idx);
            list.entries.push(Lexeme {
                surface: surface.to_string(),
                pos,
                irregular,
            });
            list.layout.push(Layout::Entry(idx));
        }
        for (idx, entry) in list.entries.iter().enumerate() {
            let line = list
                .layout
                .iter()
                .position(|l| *l == Layout::Entry(idx))
                .map_or(0, |p| p + 1);
            for irr in &entry.irregular {
                check_irregular(line, entry, irr)?;
            }
        }
        Ok(list)
    }

    /// Attaches an irregular-forms table (`root<TAB>kind<TAB>form`).
    pub fn attach_irregular(&mut self, text: &str) -> Result<(), LexiconError> {
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [root, kind, form] = fields[..] else {
                return Err(parse_error(line_no, "expected `root<TAB>kind<TAB>form`"));
            };
            let kind: IrregularKind = kind.parse().map_err(|e| parse_error(line_no, e))?;
            let form = parse_form(line_no, form)?;
            let Some(&idx) = self.index.get(root) else {
                return Err(LexiconError::UnknownRoot {
                    line: line_no,
                    root: root.to_string(),
                    form,
                });
            };
            let irr = IrregularForm {
                kind,
                form,
                origin: Origin::Table,
            };
            check_irregular(line_no, &self.entries[idx], &irr)?;
            let entry = &mut self.entries[idx];
            if !entry.irregular.contains(&irr) {
                entry.irregular.push(irr);
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&read(path)?)
    }

    pub fn load_with_irregular(path: &Path, irregular: &Path) -> Result<Self, LexiconError> {
        let mut list = Self::load(path)?;
        list.attach_irregular(&read(irregular)?)?;
        Ok(list)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Lexeme] {
        &self.entries
    }

    /// Exact lookup; no morphology. `surface` must already be case-folded.
    pub fn lookup(&self, surface: &str) -> Option<&Lexeme> {
        self.index.get(surface).map(|&i| &self.entries[i])
    }

    pub fn is_listed(&self, surface: &str) -> bool {
        self.index.contains_key(surface)
    }

    /// Position of `surface` in list order.
    pub fn position(&self, surface: &str) -> Option<usize> {
        self.index.get(surface).copied()
    }

    /// Serializes back to the word-list file format. Irregular forms that
    /// came from a separate table are not written.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for item in &self.layout {
            match item {
                Layout::Verbatim(line) => out.push_str(line),
                Layout::Entry(idx) => {
                    let e = &self.entries[*idx];
                    out.push_str(&e.surface);
                    out.push('\t');
                    out.push_str(&e.pos.to_string());
                    let inline: Vec<String> = e
                        .irregular
                        .iter()
                        .filter(|i| i.origin == Origin::Inline)
                        .map(|i| format!("{}:{}", i.kind.as_str(), i.form))
                        .collect();
                    if !inline.is_empty() {
                        out.push('\t');
                        out.push_str(&inline.join(","));
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// An inflectional irregular must not coincide with what the regular
// orthography already produces for the same slot.
fn check_irregular(line: usize, root: &Lexeme, irr: &IrregularForm) -> Result<(), LexiconError> {
    if let Some(suffix) = irr.kind.regular_suffix() {
        if apply_suffix(&root.surface, suffix) == irr.form {
            return Err(LexiconError::RegularForm {
                line,
                root: root.surface.clone(),
                kind: irr.kind.as_str().to_string(),
                form: irr.form.clone(),
            });
        }
    }
    Ok(())
}
