#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tenhundred::analyzer::{bin_for, BinId};
use tenhundred::morphology::Rule;
use tenhundred::textpipe::Token;
use tenhundred::{Engine, Morphology};

/// (surface, root, rule number) for every worked example of the rule list.
pub const WORKED_EXAMPLES: &[(&str, &str, u8)] = &[
    ("talker", "talk", 3),
    ("carrier", "carry", 3),
    ("things", "thing", 4),
    ("teeth", "tooth", 4),
    ("others", "other", 4),
    ("smaller", "small", 5),
    ("fastest", "fast", 5),
    ("worse", "bad", 5),
    ("pointy", "point", 6),
    ("colorful", "color", 6),
    ("normally", "normal", 7),
    ("thickness", "thick", 8),
    ("they", "them", 9),
    ("us", "we", 9),
    ("ours", "our", 9),
    ("his", "he", 9),
    ("thought", "think", 10),
    ("thoughts", "think", 10),
    ("live", "life", 10),
    ("living", "life", 10),
    ("person", "personal", 11),
    ("build", "building", 11),
    ("lower", "low", 12),
    ("lowering", "low", 12),
    ("lowered", "low", 12),
    ("tv", "television", 13),
];

pub const EXTRA_EXPECTED: [&str; 6] = ["apart", "hat", "mad", "rid", "some", "worth"];

/// Hand-traced inputs and their normalized token streams joined by spaces.
pub const PIPELINE_GOLDEN: &[(&str, &str)] = &[
    ("don't", "do not"),
    ("Don't go.", "do not go"),
    ("It's an apple.", "it is a apple"),
    ("An old man's boat", "a old man boat"),
    ("The dogs' food", "the dogs food"),
    ("They're here, aren't they?", "they are here are not they"),
    ("I'll see you", "i will see you"),
    ("We've been there", "we have been there"),
    ("I'm happy", "i am happy"),
    ("She'd know", "she would know"),
    ("well-known", "wellknown"),
    ("space-boat", "space boat"),
    ("up-\ngoer", "upgoer"),
    ("spaceboat", "space boat"),
    ("sunlight", "sun light"),
    ("can't won't", "can not will not"),
    ("\u{201c}Hello,\u{201d} she said.", "hello she said"),
    ("rock\u{2019}s top", "rock top"),
    ("a 42-foot boat", "a foot boat"),
    ("TV and Television", "tv and television"),
    ("an hour an", "a hour a"),
    ("heat's", "heat"),
    ("waterfall", "water fall"),
    ("Earth's heat!", "earth heat"),
    ("'quoted' words", "quoted words"),
];

pub fn engine() -> &'static Engine {
    static ENGINE: std::sync::OnceLock<Engine> = std::sync::OnceLock::new();
    ENGINE.get_or_init(Engine::reference)
}

pub fn rule(n: u8) -> Rule {
    Rule::from_number(n).expect("rule 1..=13")
}

/// Whether `surface` is recognized from `root` by `rule`.
pub fn has_derivation(m: &Morphology, surface: &str, root: &str, rule: Rule) -> bool {
    m.analyze(surface)
        .iter()
        .any(|d| d.root == root && d.rule == rule)
}

/// Every string over a-z of length 1..=max_len that gets an extra verdict.
pub fn extra_scan(m: &Morphology, max_len: usize) -> BTreeSet<String> {
    let mut found = BTreeSet::new();
    let mut buf = Vec::with_capacity(max_len);
    fn walk(m: &Morphology, buf: &mut Vec<u8>, max_len: usize, found: &mut BTreeSet<String>) {
        if !buf.is_empty() {
            let s = std::str::from_utf8(buf).unwrap();
            if m.verdict(s) == tenhundred::Verdict::Extra {
                found.insert(s.to_string());
            }
        }
        if buf.len() == max_len {
            return;
        }
        for c in b'a'..=b'z' {
            buf.push(c);
            walk(m, buf, max_len, found);
            buf.pop();
        }
    }
    walk(m, &mut buf, max_len, &mut found);
    found
}

/// Plain Levenshtein distance over chars, written without early exits.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

/// Suggestion oracle: scores the whole closure and sorts.
pub fn suggestion_oracle(m: &Morphology, surface: &str, limit: usize) -> Vec<String> {
    let mut scored: Vec<(usize, usize, &String)> = m
        .closure()
        .ranked_surfaces()
        .iter()
        .enumerate()
        .map(|(i, s)| (levenshtein(surface, s), i, s))
        .collect();
    scored.sort();
    scored.into_iter().take(limit).map(|t| t.2.clone()).collect()
}

/// Histogram oracle: looks each surface up in the closure directly and bins
/// it, without going through the analyzer.
pub fn brute_force_bins(m: &Morphology, surfaces: &[&str]) -> (HashMap<BinId, u64>, HashMap<BinId, u64>) {
    let mut forms = HashMap::new();
    let mut occurrences = HashMap::new();
    let mut seen = BTreeSet::new();
    for s in surfaces {
        let bin = match m.closure().get(s) {
            Some(ds) => bin_for(ds).unwrap(),
            None if tenhundred::morphology::EXTRA_WORDS.contains(s) => BinId::ExtraWord,
            None => continue,
        };
        *occurrences.entry(bin).or_insert(0) += 1;
        if seen.insert(*s) {
            *forms.entry(bin).or_insert(0) += 1;
        }
    }
    (forms, occurrences)
}

pub fn tokens(surfaces: &[&str]) -> Vec<Token> {
    surfaces
        .iter()
        .enumerate()
        .map(|(i, s)| Token {
            surface: s.to_string(),
            span: (i, i + 1),
            trace: Vec::new(),
        })
        .collect()
}

/// Random corpus drawn from the closure, the extra words and a few
/// underivable strings.
pub fn random_corpus(m: &Morphology, rng: &mut ChaCha8Rng, len: usize) -> Vec<String> {
    let surfaces = m.closure().ranked_surfaces();
    (0..len)
        .map(|_| match rng.random_range(0..20) {
            0 => EXTRA_EXPECTED[rng.random_range(0..6)].to_string(),
            1 => "zzyzx".to_string(),
            _ => {
                // skew towards the front of the list so words repeat
                let r: f64 = rng.random();
                surfaces[((r * r * r) * surfaces.len() as f64) as usize].clone()
            }
        })
        .collect()
}

// ---- distribution sampling, independent of the crate under test ----

/// Hurwitz zeta by direct summation plus an integral tail with one
/// trapezoid correction.
pub fn zeta_oracle(s: f64, q: f64) -> f64 {
    let n = 200_000.0;
    let mut sum = 0.0;
    let mut k = 0.0;
    while k < n {
        sum += (q + k).powf(-s);
        k += 1.0;
    }
    let a = q + n;
    sum + a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s)
}

/// Draws from the discrete power law p(x) ∝ x^-alpha, x ≥ xmin, by
/// inverting a tabulated CDF.
pub struct PowerLawSampler {
    cdf: Vec<f64>,
    xmin: u64,
    alpha: f64,
    zeta: f64,
}

impl PowerLawSampler {
    const TABLE: usize = 1_000_000;

    pub fn new(alpha: f64, xmin: u64) -> Self {
        let zeta = zeta_oracle(alpha, xmin as f64);
        let mut cdf = Vec::with_capacity(Self::TABLE);
        let mut acc = 0.0;
        for i in 0..Self::TABLE as u64 {
            acc += ((xmin + i) as f64).powf(-alpha) / zeta;
            cdf.push(acc);
        }
        PowerLawSampler { cdf, xmin, alpha, zeta }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c < u);
        if i < self.cdf.len() {
            self.xmin + i as u64
        } else {
            // far tail: P(X >= x) ~ (x - 1/2)^(1-alpha) / ((alpha-1) zeta)
            let a = self.alpha - 1.0;
            let x = 0.5 + ((1.0 - u) * a * self.zeta).powf(-1.0 / a);
            x.round() as u64
        }
    }
}

/// Geometric sample on {xmin, xmin+1, ...} with P(x) ∝ exp(-rate x).
pub fn geometric_sample(rng: &mut ChaCha8Rng, rate: f64, xmin: u64, n: usize) -> Vec<u64> {
    let q = (-rate).exp();
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            xmin + ((1.0 - u).ln() / q.ln()).floor() as u64
        })
        .collect()
}

pub fn power_law_sample(rng: &mut ChaCha8Rng, alpha: f64, xmin: u64, n: usize) -> Vec<u64> {
    let sampler = PowerLawSampler::new(alpha, xmin);
    (0..n).map(|_| sampler.sample(rng)).collect()
}

/// Discrete power-law log-likelihood maximized over a fixed grid of alpha.
pub fn grid_alpha(tail: &[u64], xmin: u64) -> f64 {
    let n = tail.len() as f64;
    let sum_ln: f64 = tail.iter().map(|&x| (x as f64).ln()).sum();
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut a = 1.05;
    while a < 5.0 {
        let ll = -n * zeta_oracle_fast(a, xmin as f64).ln() - a * sum_ln;
        if ll > best.0 {
            best = (ll, a);
        }
        a += 0.001;
    }
    best.1
}

/// Cheaper zeta for the grid: fewer direct terms, same tail correction with
/// the first derivative term.
pub fn zeta_oracle_fast(s: f64, q: f64) -> f64 {
    let n = 2_000.0;
    let mut sum = 0.0;
    let mut k = 0.0;
    while k < n {
        sum += (q + k).powf(-s);
        k += 1.0;
    }
    let a = q + n;
    sum + a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s) + s / 12.0 * a.powf(-s - 1.0)
}

/// Bar values of the word-form histogram figure, aggregates included.
pub const FIGURE_FORMS: &[(BinId, u64)] = &[
    (BinId::Listed, 780),
    (BinId::AnyS, 361),
    (BinId::NounVerbS, 260),
    (BinId::AnyEr, 168),
    (BinId::VerbIng, 167),
    (BinId::VerbEr, 119),
    (BinId::VerbEd, 114),
    (BinId::IrregularVerb, 84),
    (BinId::NounS, 68),
    (BinId::VerbS, 32),
    (BinId::AdjEr, 28),
    (BinId::AdjEst, 21),
    (BinId::VerbAdjEr, 21),
    (BinId::NounY, 7),
    (BinId::ExtraWord, 6),
    (BinId::BasicForm, 6),
    (BinId::PronounForm, 4),
    (BinId::AdjLy, 4),
    (BinId::NounToVerb, 3),
    (BinId::AdjNess, 3),
    (BinId::IrregularNoun, 3),
    (BinId::AdjToVerb, 2),
    (BinId::VerbToNoun, 1),
    (BinId::OtherS, 1),
    (BinId::FulForm, 1),
    (BinId::Acronym, 1),
];

/// Bar values of the word-occurrence histogram figure.
pub const FIGURE_OCCURRENCES: &[(BinId, u64)] = &[
    (BinId::Listed, 40494),
    (BinId::AnyS, 4688),
    (BinId::NounVerbS, 3232),
    (BinId::IrregularVerb, 1795),
    (BinId::VerbIng, 1274),
    (BinId::AnyEr, 1140),
    (BinId::NounS, 1050),
    (BinId::VerbEr, 790),
    (BinId::VerbEd, 628),
    (BinId::PronounForm, 529),
    (BinId::VerbS, 398),
    (BinId::AdjEr, 225),
    (BinId::ExtraWord, 205),
    (BinId::VerbAdjEr, 125),
    (BinId::BasicForm, 99),
    (BinId::AdjEst, 77),
    (BinId::NounToVerb, 68),
    (BinId::NounY, 36),
    (BinId::IrregularNoun, 31),
    (BinId::AdjLy, 10),
    (BinId::OtherS, 8),
    (BinId::AdjNess, 3),
    (BinId::FulForm, 3),
    (BinId::VerbToNoun, 2),
    (BinId::AdjToVerb, 2),
    (BinId::Acronym, 2),
];

/// Checks the histogram identities: disjoint bins sum to the total and each
/// aggregate equals its constituents.
pub fn identities_hold(h: &tenhundred::analyzer::RuleHistogram) -> bool {
    let disjoint: u64 = BinId::disjoint().map(|b| h.count(b)).sum();
    disjoint == h.total()
        && h.count(BinId::AnyS)
            == h.count(BinId::NounVerbS) + h.count(BinId::NounS) + h.count(BinId::VerbS) + h.count(BinId::OtherS)
        && h.count(BinId::AnyEr) == h.count(BinId::VerbEr) + h.count(BinId::AdjEr) + h.count(BinId::VerbAdjEr)
}
