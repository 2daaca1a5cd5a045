//! Production rules over the word list.
//!
//! [`derive_forms`] runs the rules forwards (root → permitted surfaces) and
//! [`analyze`] runs them backwards (surface → every derivation that licenses
//! it). [`Closure`] materializes the whole language for fast lookup.
//!
//! Rules never chain: they apply to list entries only. The few deduced forms
//! the noun/verb, base-form and adjective/verb rules need (thoughts, living,
//! lowered, ...) are generated directly from the root.

pub mod orthography;
mod suggest;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::MorphologyError;
use crate::lexicon::{IrregularKind, Lexeme, Pos, WordList};
pub use orthography::{apply_suffix, Suffix};
pub use suggest::{edit_distance, DEFAULT_SUGGESTIONS};

/// Words that occur in the reference corpus but no rule licenses.
pub const EXTRA_WORDS: [&str; 6] = ["some", "mad", "hat", "apart", "rid", "worth"];

/// A production rule. Numbered 1 to 13 in the order of the rule list, plus
/// the sentinel for tolerated extra words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Listed,
    Conjugation,
    AgentNoun,
    Plural,
    Comparison,
    NounAdjective,
    Adverb,
    Quality,
    PronounForm,
    NounVerbPair,
    BasicForm,
    AdjectiveVerb,
    Acronym,
    Extra,
}

impl Rule {
    pub const NUMBERED: [Rule; 13] = [
        Rule::Listed,
        Rule::Conjugation,
        Rule::AgentNoun,
        Rule::Plural,
        Rule::Comparison,
        Rule::NounAdjective,
        Rule::Adverb,
        Rule::Quality,
        Rule::PronounForm,
        Rule::NounVerbPair,
        Rule::BasicForm,
        Rule::AdjectiveVerb,
        Rule::Acronym,
    ];

    /// 1..=13, or `None` for [`Rule::Extra`].
    pub fn number(self) -> Option<u8> {
        Rule::NUMBERED
            .iter()
            .position(|r| *r == self)
            .map(|i| i as u8 + 1)
    }

    pub fn from_number(n: u8) -> Option<Rule> {
        Rule::NUMBERED.get(usize::from(n).checked_sub(1)?).copied()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(n) => write!(f, "{n}"),
            None => f.write_str("extra"),
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.number() {
            Some(n) => serializer.serialize_u8(n),
            None => serializer.serialize_str("extra"),
        }
    }
}

/// The grammatical slot a derived surface fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Listed,
    ThirdSingular,
    Past,
    PastParticiple,
    PresentParticiple,
    Present,
    Agent,
    Plural,
    OtherPlural,
    Comparative,
    Superlative,
    Adjective,
    Adverb,
    Quality,
    PronounVariant,
    NounToVerb,
    VerbToNoun,
    BaseForm,
    AdjectiveToVerb,
    Acronym,
    Extra,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Derivation {
    pub root: String,
    pub rule: Rule,
    pub surface: String,
    pub suffix: Option<Suffix>,
    pub form: FormKind,
    pub irregular: bool,
}

struct Forms<'a> {
    root: &'a str,
    out: BTreeSet<Derivation>,
}

impl Forms<'_> {
    fn push(&mut self, rule: Rule, surface: String, suffix: Option<Suffix>, form: FormKind, irregular: bool) {
        if rule != Rule::Listed && surface == self.root {
            return;
        }
        self.out.insert(Derivation {
            root: self.root.to_string(),
            rule,
            surface,
            suffix,
            form,
            irregular,
        });
    }

    fn regular(&mut self, rule: Rule, suffix: Suffix, form: FormKind) {
        let surface = apply_suffix(self.root, suffix);
        self.push(rule, surface, Some(suffix), form, false);
    }
}

fn irregular_slot(kind: IrregularKind) -> (Rule, FormKind, Option<Suffix>) {
    match kind {
        IrregularKind::Past => (Rule::Conjugation, FormKind::Past, None),
        IrregularKind::PastParticiple => (Rule::Conjugation, FormKind::PastParticiple, None),
        IrregularKind::PresentParticiple => (Rule::Conjugation, FormKind::PresentParticiple, None),
        IrregularKind::ThirdSingular => (Rule::Conjugation, FormKind::ThirdSingular, None),
        IrregularKind::Present => (Rule::Conjugation, FormKind::Present, None),
        IrregularKind::Plural => (Rule::Plural, FormKind::Plural, None),
        IrregularKind::Comparative => (Rule::Comparison, FormKind::Comparative, None),
        IrregularKind::Superlative => (Rule::Comparison, FormKind::Superlative, None),
        IrregularKind::PronounVariant => (Rule::PronounForm, FormKind::PronounVariant, None),
        // direction is fixed per root below
        IrregularKind::NounVerbPair => (Rule::NounVerbPair, FormKind::NounToVerb, None),
        IrregularKind::BaseFormPair => (Rule::BasicForm, FormKind::BaseForm, None),
        IrregularKind::Acronym => (Rule::Acronym, FormKind::Acronym, None),
        IrregularKind::FulAdjective => (Rule::NounAdjective, FormKind::Adjective, Some(Suffix::Ful)),
    }
}

fn generate(lexeme: &Lexeme) -> BTreeSet<Derivation> {
    let root = lexeme.surface();
    let mut forms = Forms {
        root,
        out: BTreeSet::new(),
    };
    forms.push(Rule::Listed, root.to_string(), None, FormKind::Listed, false);

    for irr in lexeme.irregular() {
        let (rule, mut form, suffix) = irregular_slot(irr.kind);
        if irr.kind == IrregularKind::NounVerbPair && lexeme.has_pos(Pos::Verb) {
            form = FormKind::VerbToNoun;
        }
        let irregular = matches!(rule, Rule::Conjugation | Rule::Plural | Rule::Comparison);
        forms.push(rule, irr.form.clone(), suffix, form, irregular);
    }

    if lexeme.has_pos(Pos::Verb) {
        if !lexeme.has_irregular(IrregularKind::ThirdSingular) {
            forms.regular(Rule::Conjugation, Suffix::S, FormKind::ThirdSingular);
        }
        if !lexeme.has_irregular(IrregularKind::Past) {
            forms.regular(Rule::Conjugation, Suffix::Ed, FormKind::Past);
        }
        if !lexeme.has_irregular(IrregularKind::PresentParticiple) {
            forms.regular(Rule::Conjugation, Suffix::Ing, FormKind::PresentParticiple);
        }
        forms.regular(Rule::AgentNoun, Suffix::Er, FormKind::Agent);
    }

    if lexeme.has_pos(Pos::Noun) {
        if !lexeme.has_irregular(IrregularKind::Plural) {
            forms.regular(Rule::Plural, Suffix::S, FormKind::Plural);
        }
        if !root.ends_with('y') {
            forms.regular(Rule::NounAdjective, Suffix::Y, FormKind::Adjective);
        }
    }
    if root == "other" {
        forms.push(Rule::Plural, "others".into(), Some(Suffix::S), FormKind::OtherPlural, false);
    }

    if lexeme.has_pos(Pos::Adjective) {
        let irregular_comparison = lexeme.has_irregular(IrregularKind::Comparative);
        if !irregular_comparison {
            forms.regular(Rule::Comparison, Suffix::Er, FormKind::Comparative);
        }
        if !lexeme.has_irregular(IrregularKind::Superlative) {
            forms.regular(Rule::Comparison, Suffix::Est, FormKind::Superlative);
        }
        forms.regular(Rule::Adverb, Suffix::Ly, FormKind::Adverb);
        forms.regular(Rule::Quality, Suffix::Ness, FormKind::Quality);
        if !irregular_comparison {
            let verb = apply_suffix(root, Suffix::Er);
            for suffix in [Suffix::S, Suffix::Ed, Suffix::Ing] {
                let surface = apply_suffix(&verb, suffix);
                forms.push(Rule::AdjectiveVerb, surface, Some(suffix), FormKind::AdjectiveToVerb, false);
            }
            forms.push(Rule::AdjectiveVerb, verb, Some(Suffix::Er), FormKind::AdjectiveToVerb, false);
        }
    }
    forms.out
}

/// Every surface `lexeme` licenses, with the rule that licenses it.
pub fn derive_forms(lexeme: &Lexeme, word_list: &WordList) -> Result<Vec<Derivation>, MorphologyError> {
    match word_list.lookup(lexeme.surface()) {
        Some(listed) if listed == lexeme => Ok(generate(lexeme).into_iter().collect()),
        _ => Err(MorphologyError::NotListed(lexeme.surface().to_string())),
    }
}

// Regular derivations keep the root as a prefix, up to a final e, y, ie or le
// that spelling rules rewrite. Irregular forms come from the reverse index.
fn candidate_roots(surface: &str, word_list: &WordList, irregular: &[usize]) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = irregular.iter().copied().collect();
    let mut probe = String::with_capacity(surface.len() + 2);
    for (end, c) in surface.char_indices() {
        let prefix = &surface[..end + c.len_utf8()];
        for tail in ["", "e", "y", "ie", "le"] {
            probe.clear();
            probe.push_str(prefix);
            probe.push_str(tail);
            if let Some(i) = word_list.position(&probe) {
                out.insert(i);
            }
        }
    }
    out
}

fn recognize(surface: &str, word_list: &WordList, irregular: &[usize]) -> Vec<Derivation> {
    if surface.is_empty() {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for i in candidate_roots(surface, word_list, irregular) {
        let lexeme = &word_list.entries()[i];
        out.extend(generate(lexeme).into_iter().filter(|d| d.surface == surface));
    }
    out.into_iter().collect()
}

/// All derivations whose root generates `surface`. Empty if underivable.
pub fn analyze(surface: &str, word_list: &WordList) -> Vec<Derivation> {
    let roots: Vec<usize> = word_list
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.irregular().iter().any(|i| i.form == surface))
        .map(|(i, _)| i)
        .collect();
    recognize(surface, word_list, &roots)
}

/// The full language: every derivable surface with its derivations.
#[derive(Debug, Clone, Default)]
pub struct Closure {
    map: HashMap<String, Vec<Derivation>>,
    /// Surfaces ordered by the list position of their earliest root.
    ranked: Vec<String>,
}

impl Closure {
    pub fn get(&self, surface: &str) -> Option<&[Derivation]> {
        self.map.get(surface).map(Vec::as_slice)
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.map.contains_key(surface)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Surfaces in list order of their roots, ties broken alphabetically.
    pub fn ranked_surfaces(&self) -> &[String] {
        &self.ranked
    }

    /// Sorted `(surface, derivations)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Derivation])> {
        let mut keys: Vec<&String> = self.map.keys().collect();
        keys.sort();
        keys.into_iter().map(|k| (k.as_str(), self.map[k].as_slice()))
    }

    /// `surface<TAB>root<TAB>rule`, one line per derivation, sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (surface, derivations) in self.iter() {
            for d in derivations {
                out.push_str(&format!("{surface}\t{}\t{}\n", d.root, d.rule));
            }
        }
        out
    }
}

pub fn closure(word_list: &WordList) -> Closure {
    let mut sets: HashMap<String, BTreeSet<Derivation>> = HashMap::new();
    let mut rank: HashMap<String, usize> = HashMap::new();
    for (i, lexeme) in word_list.entries().iter().enumerate() {
        for d in generate(lexeme) {
            rank.entry(d.surface.clone()).or_insert(i);
            sets.entry(d.surface.clone()).or_default().insert(d);
        }
    }
    let mut ranked: Vec<String> = rank.keys().cloned().collect();
    ranked.sort_by(|a, b| rank[a].cmp(&rank[b]).then_with(|| a.cmp(b)));
    Closure {
        map: sets.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
        ranked,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Allowed,
    Extra,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub surface: String,
    pub verdict: Verdict,
    pub derivations: Vec<Derivation>,
    pub suggestions: Vec<String>,
}

impl CheckResult {
    pub fn rules(&self) -> Vec<Rule> {
        let set: BTreeSet<Rule> = self.derivations.iter().map(|d| d.rule).collect();
        set.into_iter().collect()
    }
}

/// The word list together with its closure and the indexes the recognizer
/// needs. Immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct Morphology {
    words: WordList,
    closure: Closure,
    irregular_roots: HashMap<String, Vec<usize>>,
}

impl Morphology {
    pub fn new(words: WordList) -> Self {
        let mut irregular_roots: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in words.entries().iter().enumerate() {
            for irr in e.irregular() {
                let roots = irregular_roots.entry(irr.form.clone()).or_default();
                if !roots.contains(&i) {
                    roots.push(i);
                }
            }
        }
        let closure = closure(&words);
        Morphology {
            words,
            closure,
            irregular_roots,
        }
    }

    pub fn words(&self) -> &WordList {
        &self.words
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn derive_forms(&self, surface: &str) -> Result<Vec<Derivation>, MorphologyError> {
        let lexeme = self
            .words
            .lookup(surface)
            .ok_or_else(|| MorphologyError::NotListed(surface.to_string()))?;
        derive_forms(lexeme, &self.words)
    }

    /// Recognizer: finds derivations by suffix-stripping candidate roots.
    pub fn analyze(&self, surface: &str) -> Vec<Derivation> {
        let irregular = self
            .irregular_roots
            .get(surface)
            .map(Vec::as_slice)
            .unwrap_or_default();
        recognize(surface, &self.words, irregular)
    }

    pub fn is_allowed(&self, surface: &str) -> bool {
        self.closure.contains(surface)
    }

    pub fn suggest(&self, surface: &str, limit: usize) -> Vec<String> {
        suggest::rank(surface, self.closure.ranked_surfaces(), limit)
    }

    pub fn verdict(&self, surface: &str) -> Verdict {
        if self.closure.contains(surface) {
            Verdict::Allowed
        } else if EXTRA_WORDS.contains(&surface) {
            Verdict::Extra
        } else {
            Verdict::Rejected
        }
    }

    /// Verdict, derivations and (for words that are not allowed) ranked
    /// suggestions. Derivable words are allowed even if they are also in
    /// [`EXTRA_WORDS`].
    pub fn check_token(&self, surface: &str) -> CheckResult {
        if let Some(derivations) = self.closure.get(surface) {
            return CheckResult {
                surface: surface.to_string(),
                verdict: Verdict::Allowed,
                derivations: derivations.to_vec(),
                suggestions: Vec::new(),
            };
        }
        let (verdict, derivations) = if EXTRA_WORDS.contains(&surface) {
            let extra = Derivation {
                root: surface.to_string(),
                rule: Rule::Extra,
                surface: surface.to_string(),
                suffix: None,
                form: FormKind::Extra,
                irregular: false,
            };
            (Verdict::Extra, vec![extra])
        } else {
            (Verdict::Rejected, Vec::new())
        };
        CheckResult {
            surface: surface.to_string(),
            verdict,
            derivations,
            suggestions: self.suggest(surface, DEFAULT_SUGGESTIONS),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> WordList {
        WordList::parse("talk\tverb\nthing\tnoun\ngood\tadjective\n").unwrap()
    }

    fn surfaces(ds: &[Derivation]) -> BTreeSet<&str> {
        ds.iter().map(|d| d.surface.as_str()).collect()
    }

    #[test]
    fn rule_numbers_round_trip() {
        for n in 1..=13 {
            assert_eq!(Rule::from_number(n).unwrap().number(), Some(n));
        }
        assert_eq!(Rule::Extra.number(), None);
        assert_eq!(Rule::from_number(0), None);
        assert_eq!(Rule::from_number(14), None);
    }

    #[test]
    fn toy_closure_matches_hand_enumeration() {
        let words = toy();
        let c = closure(&words);
        let got: BTreeSet<(String, String, Rule)> = c
            .iter()
            .flat_map(|(_, ds)| ds.iter().map(|d| (d.surface.clone(), d.root.clone(), d.rule)))
            .collect();
        let expected: BTreeSet<(String, String, Rule)> = [
            ("talk", "talk", Rule::Listed),
            ("talks", "talk", Rule::Conjugation),
            ("talked", "talk", Rule::Conjugation),
            ("talking", "talk", Rule::Conjugation),
            ("talker", "talk", Rule::AgentNoun),
            ("thing", "thing", Rule::Listed),
            ("things", "thing", Rule::Plural),
            ("thingy", "thing", Rule::NounAdjective),
            ("good", "good", Rule::Listed),
            ("gooder", "good", Rule::Comparison),
            ("goodest", "good", Rule::Comparison),
            ("goodly", "good", Rule::Adverb),
            ("goodness", "good", Rule::Quality),
            ("gooder", "good", Rule::AdjectiveVerb),
            ("gooders", "good", Rule::AdjectiveVerb),
            ("goodered", "good", Rule::AdjectiveVerb),
            ("goodering", "good", Rule::AdjectiveVerb),
        ]
        .into_iter()
        .map(|(s, r, rule)| (s.to_string(), r.to_string(), rule))
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn determiner_has_only_the_listed_form() {
        let words = WordList::parse("the\tdeterminer\n").unwrap();
        let ds = derive_forms(words.lookup("the").unwrap(), &words).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].rule, Rule::Listed);
        assert_eq!(ds[0].suffix, None);
    }

    #[test]
    fn unlisted_lexeme_is_a_domain_error() {
        let words = toy();
        let other = WordList::parse("boat\tnoun\n").unwrap();
        let err = derive_forms(other.lookup("boat").unwrap(), &words).unwrap_err();
        assert_eq!(err, MorphologyError::NotListed("boat".into()));
    }

    #[test]
    fn irregulars_override_regular_spelling() {
        let mut words = WordList::parse("tooth\tnoun\ngo\tverb\n").unwrap();
        words
            .attach_irregular("tooth\tplural\tteeth\ngo\tpast\twent\ngo\tpast-participle\tgone\n")
            .unwrap();
        let m = Morphology::new(words);
        let tooth = m.derive_forms("tooth").unwrap();
        assert!(surfaces(&tooth).contains("teeth"));
        assert!(!surfaces(&tooth).contains("tooths"));
        let go = m.derive_forms("go").unwrap();
        assert!(surfaces(&go).is_superset(&["goes", "went", "gone", "going", "goer"].into()));
        assert!(!surfaces(&go).contains("goed"));
    }

    #[test]
    fn recognizer_finds_ambiguous_readings() {
        let words = WordList::parse("name\tnoun,verb\ncool\tverb,adjective\n").unwrap();
        let names = analyze("names", &words);
        let rules: BTreeSet<Rule> = names.iter().map(|d| d.rule).collect();
        assert_eq!(rules, [Rule::Conjugation, Rule::Plural].into());
        let cooler = analyze("cooler", &words);
        let rules: BTreeSet<Rule> = cooler.iter().map(|d| d.rule).collect();
        assert!(rules.is_superset(&[Rule::AgentNoun, Rule::Comparison].into()));
        assert!(analyze("xylophone", &words).is_empty());
        assert!(analyze("", &words).is_empty());
    }

    #[test]
    fn check_verdicts() {
        let m = Morphology::new(toy());
        assert_eq!(m.check_token("talked").verdict, Verdict::Allowed);
        let mad = m.check_token("mad");
        assert_eq!(mad.verdict, Verdict::Extra);
        assert_eq!(mad.derivations[0].rule, Rule::Extra);
        let r = m.check_token("walked");
        assert_eq!(r.verdict, Verdict::Rejected);
        assert!(r.derivations.is_empty());
        assert_eq!(r.suggestions[0], "talked");
    }
}
