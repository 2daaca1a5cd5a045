//! Corpus statistics: which rule licensed each word form, how much of a text
//! the list covers directly, and rank-frequency tables.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{AnalyzeError, InputError};
use crate::morphology::{CheckResult, Derivation, FormKind, Morphology, Rule, Verdict};
use crate::textpipe::Token;

/// Histogram categories. Two of them (`AnyS`, `AnyEr`) are aggregates of
/// other bins; the rest are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinId {
    Listed,
    AnyS,
    NounVerbS,
    AnyEr,
    VerbIng,
    VerbEr,
    VerbEd,
    IrregularVerb,
    NounS,
    VerbS,
    AdjEr,
    AdjEst,
    VerbAdjEr,
    NounY,
    ExtraWord,
    BasicForm,
    PronounForm,
    AdjLy,
    NounToVerb,
    AdjNess,
    IrregularNoun,
    AdjToVerb,
    VerbToNoun,
    OtherS,
    FulForm,
    Acronym,
}

impl BinId {
    pub const ALL: [BinId; 26] = [
        BinId::Listed,
        BinId::AnyS,
        BinId::NounVerbS,
        BinId::AnyEr,
        BinId::VerbIng,
        BinId::VerbEr,
        BinId::VerbEd,
        BinId::IrregularVerb,
        BinId::NounS,
        BinId::VerbS,
        BinId::AdjEr,
        BinId::AdjEst,
        BinId::VerbAdjEr,
        BinId::NounY,
        BinId::ExtraWord,
        BinId::BasicForm,
        BinId::PronounForm,
        BinId::AdjLy,
        BinId::NounToVerb,
        BinId::AdjNess,
        BinId::IrregularNoun,
        BinId::AdjToVerb,
        BinId::VerbToNoun,
        BinId::OtherS,
        BinId::FulForm,
        BinId::Acronym,
    ];

    pub fn key(self) -> &'static str {
        match self {
            BinId::Listed => "listed",
            BinId::AnyS => "any_s",
            BinId::NounVerbS => "noun_verb_s",
            BinId::AnyEr => "any_er",
            BinId::VerbIng => "verb_ing",
            BinId::VerbEr => "verb_er",
            BinId::VerbEd => "verb_ed",
            BinId::IrregularVerb => "irregular_verb",
            BinId::NounS => "noun_s",
            BinId::VerbS => "verb_s",
            BinId::AdjEr => "adj_er",
            BinId::AdjEst => "adj_est",
            BinId::VerbAdjEr => "verb_adj_er",
            BinId::NounY => "noun_y",
            BinId::ExtraWord => "extra_word",
            BinId::BasicForm => "basic_form",
            BinId::PronounForm => "pronoun_form",
            BinId::AdjLy => "adj_ly",
            BinId::NounToVerb => "noun_to_verb",
            BinId::AdjNess => "adj_ness",
            BinId::IrregularNoun => "irregular_noun",
            BinId::AdjToVerb => "adj_to_verb",
            BinId::VerbToNoun => "verb_to_noun",
            BinId::OtherS => "other_s",
            BinId::FulForm => "ful_form",
            BinId::Acronym => "acronym",
        }
    }

    /// Human-readable label, as used on plots.
    pub fn label(self) -> &'static str {
        match self {
            BinId::Listed => "listed form (rule 1)",
            BinId::AnyS => "* + s (rules 2/4)",
            BinId::NounVerbS => "noun-verb + s (rules 2/4)",
            BinId::AnyEr => "* + er (rules 3/5)",
            BinId::VerbIng => "verb + ing (rule 2)",
            BinId::VerbEr => "verb + er (rule 3)",
            BinId::VerbEd => "verb + ed (rule 2)",
            BinId::IrregularVerb => "irregular verb form (rule 2)",
            BinId::NounS => "noun + s (rule 4)",
            BinId::VerbS => "verb + s (rule 2)",
            BinId::AdjEr => "adj + er (rule 5)",
            BinId::AdjEst => "adj + est (rule 5)",
            BinId::VerbAdjEr => "verb-adj + er (rules 3/5)",
            BinId::NounY => "noun + y (rule 6)",
            BinId::ExtraWord => "extra word",
            BinId::BasicForm => "basic form (rule 11)",
            BinId::PronounForm => "pronoun form (rule 9)",
            BinId::AdjLy => "adj + ly (rule 7)",
            BinId::NounToVerb => "noun to verb (rule 10)",
            BinId::AdjNess => "adj + ness (rule 8)",
            BinId::IrregularNoun => "irregular noun form (rule 4)",
            BinId::AdjToVerb => "adj to verb (rule 12)",
            BinId::VerbToNoun => "verb to noun (rule 10)",
            BinId::OtherS => "other + s (rule 4)",
            BinId::FulForm => "noun + ful (rule 6)",
            BinId::Acronym => "acronym (rule 13)",
        }
    }

    pub fn constituents(self) -> &'static [BinId] {
        match self {
            BinId::AnyS => &[BinId::NounVerbS, BinId::NounS, BinId::VerbS, BinId::OtherS],
            BinId::AnyEr => &[BinId::VerbEr, BinId::AdjEr, BinId::VerbAdjEr],
            _ => &[],
        }
    }

    pub fn is_aggregate(self) -> bool {
        !self.constituents().is_empty()
    }

    pub fn disjoint() -> impl Iterator<Item = BinId> {
        BinId::ALL.into_iter().filter(|b| !b.is_aggregate())
    }
}

fn bin_of(d: &Derivation) -> BinId {
    match (d.rule, d.form) {
        (Rule::Listed, _) => BinId::Listed,
        (Rule::Extra, _) => BinId::ExtraWord,
        (Rule::Conjugation, _) if d.irregular => BinId::IrregularVerb,
        (Rule::Conjugation, FormKind::ThirdSingular) => BinId::VerbS,
        (Rule::Conjugation, FormKind::PresentParticiple) => BinId::VerbIng,
        (Rule::Conjugation, _) => BinId::VerbEd,
        (Rule::AgentNoun, _) => BinId::VerbEr,
        (Rule::Plural, FormKind::OtherPlural) => BinId::OtherS,
        (Rule::Plural, _) if d.irregular => BinId::IrregularNoun,
        (Rule::Plural, _) => BinId::NounS,
        (Rule::Comparison, FormKind::Superlative) => BinId::AdjEst,
        (Rule::Comparison, _) => BinId::AdjEr,
        (Rule::NounAdjective, _) if d.suffix == Some(crate::morphology::Suffix::Ful) => BinId::FulForm,
        (Rule::NounAdjective, _) => BinId::NounY,
        (Rule::Adverb, _) => BinId::AdjLy,
        (Rule::Quality, _) => BinId::AdjNess,
        (Rule::PronounForm, _) => BinId::PronounForm,
        (Rule::NounVerbPair, FormKind::VerbToNoun) => BinId::VerbToNoun,
        (Rule::NounVerbPair, _) => BinId::NounToVerb,
        (Rule::BasicForm, _) => BinId::BasicForm,
        (Rule::AdjectiveVerb, _) => BinId::AdjToVerb,
        (Rule::Acronym, _) => BinId::Acronym,
    }
}

/// Assigns one disjoint bin to a non-empty derivation set. Listed forms win;
/// regular -s forms readable as both plural and third person go to
/// noun-verb+s, regular -er forms readable as both agent noun and
/// comparative go to verb-adj+er; otherwise the lowest-numbered rule decides.
pub fn bin_for(derivations: &[Derivation]) -> Option<BinId> {
    let has = |rule: Rule, form: FormKind| {
        derivations
            .iter()
            .any(|d| d.rule == rule && d.form == form && !d.irregular)
    };
    if derivations.iter().any(|d| d.rule == Rule::Listed) {
        return Some(BinId::Listed);
    }
    if has(Rule::Plural, FormKind::Plural) && has(Rule::Conjugation, FormKind::ThirdSingular) {
        return Some(BinId::NounVerbS);
    }
    if has(Rule::AgentNoun, FormKind::Agent) && has(Rule::Comparison, FormKind::Comparative) {
        return Some(BinId::VerbAdjEr);
    }
    derivations.iter().min_by_key(|d| (d.rule, d.form)).map(bin_of)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HistogramMode {
    WordForms,
    WordOccurrences,
}

/// Counts per bin. Only disjoint bins are stored; aggregates are sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleHistogram {
    mode: HistogramMode,
    counts: BTreeMap<BinId, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    pub bin: BinId,
    pub stated: u64,
    pub summed: u64,
}

impl RuleHistogram {
    pub fn new(mode: HistogramMode) -> Self {
        RuleHistogram {
            mode,
            counts: BTreeMap::new(),
        }
    }

    /// Builds a histogram from a full table of bin values, aggregates
    /// included, and checks the aggregates against their constituents.
    pub fn from_table(
        mode: HistogramMode,
        table: impl IntoIterator<Item = (BinId, u64)>,
    ) -> Result<Self, IdentityViolation> {
        let table: BTreeMap<BinId, u64> = table.into_iter().collect();
        let mut hist = RuleHistogram::new(mode);
        for bin in BinId::disjoint() {
            hist.add(bin, table.get(&bin).copied().unwrap_or(0));
        }
        for (bin, &stated) in table.iter().filter(|(b, _)| b.is_aggregate()) {
            let summed = hist.count(*bin);
            if summed != stated {
                return Err(IdentityViolation {
                    bin: *bin,
                    stated,
                    summed,
                });
            }
        }
        Ok(hist)
    }

    pub fn mode(&self) -> HistogramMode {
        self.mode
    }

    pub fn add(&mut self, bin: BinId, n: u64) {
        assert!(!bin.is_aggregate(), "aggregate bins are derived");
        if n > 0 {
            *self.counts.entry(bin).or_default() += n;
        }
    }

    pub fn count(&self, bin: BinId) -> u64 {
        if bin.is_aggregate() {
            bin.constituents().iter().map(|b| self.count(*b)).sum()
        } else {
            self.counts.get(&bin).copied().unwrap_or(0)
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn merge(&mut self, other: &RuleHistogram) {
        for (bin, n) in &other.counts {
            self.add(*bin, *n);
        }
    }
}

impl Serialize for RuleHistogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Bins<'a>(&'a RuleHistogram);
        impl Serialize for Bins<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(BinId::ALL.len()))?;
                for bin in BinId::ALL {
                    map.serialize_entry(bin.key(), &self.0.count(bin))?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("mode", &self.mode)?;
        map.serialize_entry("total", &self.total())?;
        map.serialize_entry("bins", &Bins(self))?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Underivable {
    pub surface: String,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub forms: RuleHistogram,
    pub occurrences: RuleHistogram,
    /// One result per distinct surface, in order of first occurrence.
    pub results: Vec<CheckResult>,
    pub underivable: Vec<Underivable>,
}

/// Classifies every distinct surface of a token stream. Underivable surfaces
/// are left out of both histograms and listed separately.
pub fn classify_stream(tokens: &[Token], morphology: &Morphology) -> Classification {
    let mut order: Vec<&str> = Vec::new();
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in tokens {
        let c = counts.entry(t.surface.as_str()).or_insert_with(|| {
            order.push(t.surface.as_str());
            0
        });
        *c += 1;
    }
    let mut forms = RuleHistogram::new(HistogramMode::WordForms);
    let mut occurrences = RuleHistogram::new(HistogramMode::WordOccurrences);
    let mut results = Vec::with_capacity(order.len());
    let mut underivable = Vec::new();
    for surface in order {
        let n = counts[surface];
        let result = morphology.check_token(surface);
        match bin_for(&result.derivations) {
            Some(bin) => {
                forms.add(bin, 1);
                occurrences.add(bin, n);
            }
            None => underivable.push(Underivable {
                surface: surface.to_string(),
                count: n,
            }),
        }
        results.push(result);
    }
    Classification {
        forms,
        occurrences,
        results,
        underivable,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    /// Share of token occurrences that are listed forms.
    pub tokens: f64,
    /// Share of distinct word forms that are listed forms.
    pub forms: f64,
}

pub fn coverage(forms: &RuleHistogram, occurrences: &RuleHistogram) -> Result<Coverage, AnalyzeError> {
    if forms.total() == 0 || occurrences.total() == 0 {
        return Err(AnalyzeError::EmptyCorpus);
    }
    let share = |h: &RuleHistogram| h.count(BinId::Listed) as f64 / h.total() as f64;
    Ok(Coverage {
        tokens: share(occurrences),
        forms: share(forms),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    Surface,
    Lemmatized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub term: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RankFrequency {
    pub rows: Vec<RankRow>,
}

impl RankFrequency {
    /// Sorts by descending count, ties alphabetical, and assigns ranks.
    pub fn from_counts(counts: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut pairs: Vec<(String, u64)> = counts.into_iter().filter(|p| p.1 > 0).collect();
        pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        RankFrequency {
            rows: pairs
                .into_iter()
                .enumerate()
                .map(|(i, (term, count))| RankRow {
                    rank: i + 1,
                    term,
                    count,
                })
                .collect(),
        }
    }

    pub fn counts(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.count).collect()
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# rank\tterm\tcount\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\t{}\n", r.rank, r.term, r.count));
        }
        out
    }

    /// Parses `rank<TAB>term<TAB>count` lines; `#` lines are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, InputError> {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: &str| InputError::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [rank, term, count] = fields[..] else {
                return Err(bad("expected `rank<TAB>term<TAB>count`"));
            };
            rows.push(RankRow {
                rank: rank.parse().map_err(|_| bad("rank is not an integer"))?,
                term: term.to_string(),
                count: count.parse().map_err(|_| bad("count is not an integer"))?,
            });
        }
        Ok(RankFrequency { rows })
    }
}

/// The list entry a surface counts towards: the surface itself when listed,
/// the single shared root otherwise, or the alphabetically first root when
/// the readings disagree. Extra words count as themselves.
pub fn lemma(surface: &str, morphology: &Morphology) -> Option<String> {
    let derivations = morphology.closure().get(surface)?;
    if derivations.iter().any(|d| d.rule == Rule::Listed) {
        return Some(surface.to_string());
    }
    let roots: BTreeSet<&str> = derivations.iter().map(|d| d.root.as_str()).collect();
    roots.into_iter().next().map(str::to_string)
}

pub fn rank_frequency(tokens: &[Token], mode: RankMode, morphology: &Morphology) -> RankFrequency {
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut lemmas: HashMap<&str, Option<String>> = HashMap::new();
    for t in tokens {
        let term = match mode {
            RankMode::Surface => Some(t.surface.clone()),
            RankMode::Lemmatized => lemmas
                .entry(t.surface.as_str())
                .or_insert_with(|| {
                    let check = morphology.verdict(&t.surface);
                    match check {
                        Verdict::Extra => Some(t.surface.clone()),
                        _ => lemma(&t.surface, morphology),
                    }
                })
                .clone(),
        };
        if let Some(term) = term {
            *counts.entry(term).or_default() += 1;
        }
    }
    RankFrequency::from_counts(counts)
}
