use std::path::PathBuf;

use pyo3::exceptions::{PyKeyError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;
use tenhundred_core::analyzer::{classify_stream, coverage, rank_frequency, RankMode};
use tenhundred_core::distfit::{self, CountSample, DEFAULT_THRESHOLD};
use tenhundred_core::{DataPaths, LoadError, MorphologyError};

// kebab/lowercase names as they appear in JSON output
fn name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(e) => e.to_string(),
    }
}

fn load_error(e: LoadError) -> PyErr {
    match e {
        LoadError::Input(tenhundred_core::InputError::Io { .. }) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(frozen, get_all, module = "tenhundred")]
#[derive(Clone)]
struct Token {
    surface: String,
    start: usize,
    end: usize,
    trace: Vec<String>,
}

#[pymethods]
impl Token {
    fn __repr__(&self) -> String {
        format!("Token({:?}, {}..{})", self.surface, self.start, self.end)
    }
}

#[pyclass(frozen, get_all, module = "tenhundred")]
#[derive(Clone)]
struct Derivation {
    root: String,
    /// 1..=13, or None for an extra word.
    rule: Option<u8>,
    surface: String,
    suffix: Option<String>,
    form: String,
    irregular: bool,
}

#[pymethods]
impl Derivation {
    fn __repr__(&self) -> String {
        let rule = self.rule.map_or("extra".to_string(), |n| n.to_string());
        format!("Derivation({:?} <- {:?}, rule {rule})", self.surface, self.root)
    }
}

impl From<&tenhundred_core::Derivation> for Derivation {
    fn from(d: &tenhundred_core::Derivation) -> Self {
        Derivation {
            root: d.root.clone(),
            rule: d.rule.number(),
            surface: d.surface.clone(),
            suffix: d.suffix.as_ref().map(name),
            form: name(&d.form),
            irregular: d.irregular,
        }
    }
}

#[pyclass(frozen, get_all, module = "tenhundred")]
#[derive(Clone)]
struct CheckResult {
    surface: String,
    /// "allowed", "extra" or "rejected".
    verdict: String,
    derivations: Vec<Derivation>,
    suggestions: Vec<String>,
}

#[pymethods]
impl CheckResult {
    fn __repr__(&self) -> String {
        format!("CheckResult({:?}, {})", self.surface, self.verdict)
    }
}

impl From<tenhundred_core::CheckResult> for CheckResult {
    fn from(r: tenhundred_core::CheckResult) -> Self {
        CheckResult {
            verdict: name(&r.verdict),
            derivations: r.derivations.iter().map(Derivation::from).collect(),
            surface: r.surface,
            suggestions: r.suggestions,
        }
    }
}

#[pyclass(frozen, get_all, module = "tenhundred")]
#[derive(Clone)]
struct Annotation {
    start: usize,
    end: usize,
    surface: String,
    verdict: String,
    suggestions: Vec<String>,
}

#[pymethods]
impl Annotation {
    fn __repr__(&self) -> String {
        format!("Annotation({:?}, {}, {}..{})", self.surface, self.verdict, self.start, self.end)
    }
}

#[pyclass(frozen, get_all, module = "tenhundred")]
#[derive(Clone)]
struct FitReport {
    alpha: f64,
    xmin: u64,
    ks: f64,
    ntail: usize,
    small_tail: bool,
    exponential_rate: f64,
    ratio: f64,
    p_value: f64,
    /// "power-law", "exponential" or "undecided".
    preferred: String,
}

#[pymethods]
impl FitReport {
    fn __repr__(&self) -> String {
        format!(
            "FitReport(alpha={:.4}, xmin={}, R={:.3}, p={:.4}, preferred={})",
            self.alpha, self.xmin, self.ratio, self.p_value, self.preferred
        )
    }
}

/// Word list, irregular forms and contractions with the derived closure.
#[pyclass(frozen, module = "tenhundred")]
struct Engine {
    inner: tenhundred_core::Engine,
}

#[pymethods]
impl Engine {
    #[new]
    #[pyo3(signature = (word_list=None, irregular=None, contractions=None, data_dir=None))]
    fn new(
        word_list: Option<PathBuf>,
        irregular: Option<PathBuf>,
        contractions: Option<PathBuf>,
        data_dir: Option<PathBuf>,
    ) -> PyResult<Self> {
        let paths = DataPaths { word_list, irregular, contractions };
        let inner = tenhundred_core::Engine::load(&paths, data_dir.as_deref()).map_err(load_error)?;
        Ok(Engine { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.words().len()
    }

    fn __contains__(&self, surface: &str) -> bool {
        self.inner.morphology().closure().contains(surface)
    }

    /// Number of distinct surfaces the rules allow.
    fn closure_size(&self) -> usize {
        self.inner.morphology().closure().len()
    }

    fn is_listed(&self, word: &str) -> bool {
        self.inner.words().is_listed(word)
    }

    fn tokenize(&self, text: &str) -> Vec<Token> {
        self.inner
            .tokenize(text)
            .into_iter()
            .map(|t| Token {
                surface: t.surface,
                start: t.span.0,
                end: t.span.1,
                trace: t.trace.iter().map(name).collect(),
            })
            .collect()
    }

    fn check_token(&self, surface: &str) -> CheckResult {
        self.inner.check_token(surface).into()
    }

    /// Annotations for every token of `text` that is not allowed.
    fn check(&self, text: &str) -> Vec<Annotation> {
        self.inner
            .tokenize(text)
            .into_iter()
            .filter_map(|t| {
                let r = self.inner.check_token(&t.surface);
                (r.verdict != tenhundred_core::Verdict::Allowed).then(|| Annotation {
                    start: t.span.0,
                    end: t.span.1,
                    surface: t.surface,
                    verdict: name(&r.verdict),
                    suggestions: r.suggestions,
                })
            })
            .collect()
    }

    /// All derivations of a surface form, empty if none.
    fn analyze(&self, surface: &str) -> Vec<Derivation> {
        self.inner.morphology().analyze(surface).iter().map(Derivation::from).collect()
    }

    /// Forms generated from a listed word.
    fn expand(&self, word: &str) -> PyResult<Vec<Derivation>> {
        let ds = self
            .inner
            .morphology()
            .derive_forms(word)
            .map_err(|e: MorphologyError| PyKeyError::new_err(e.to_string()))?;
        Ok(ds.iter().map(Derivation::from).collect())
    }

    /// Bin histograms and coverage of a text, as plain dicts.
    fn histogram<'py>(&self, py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
        let c = classify_stream(&self.inner.tokenize(text), self.inner.morphology());
        let cov = coverage(&c.forms, &c.occurrences).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let report = serde_json::json!({
            "forms": c.forms,
            "occurrences": c.occurrences,
            "coverage": cov,
            "underivable": c.underivable,
        });
        py.import("json")?.call_method1("loads", (report.to_string(),))
    }

    /// (term, count) pairs by descending count.
    #[pyo3(signature = (text, lemmatized=false))]
    fn rank_frequency(&self, text: &str, lemmatized: bool) -> Vec<(String, u64)> {
        let mode = if lemmatized { RankMode::Lemmatized } else { RankMode::Surface };
        rank_frequency(&self.inner.tokenize(text), mode, self.inner.morphology())
            .rows
            .into_iter()
            .map(|r| (r.term, r.count))
            .collect()
    }
}

/// Fits a discrete power law to positive counts and compares it with an
/// exponential tail.
#[pyfunction]
#[pyo3(signature = (counts, threshold=DEFAULT_THRESHOLD, xmin=None))]
fn fit(counts: Vec<u64>, threshold: f64, xmin: Option<u64>) -> PyResult<FitReport> {
    let err = |e: tenhundred_core::FitError| PyValueError::new_err(e.to_string());
    let sample = CountSample::new(counts).map_err(err)?;
    let r = distfit::fit_report_at(&sample, xmin, threshold).map_err(err)?;
    Ok(FitReport {
        alpha: r.alpha,
        xmin: r.xmin,
        ks: r.ks,
        ntail: r.ntail,
        small_tail: r.small_tail,
        exponential_rate: r.exponential_rate,
        ratio: r.ratio,
        p_value: r.p_value,
        preferred: name(&r.preferred),
    })
}

#[pyfunction]
fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    distfit::hurwitz_zeta(s, q)
}

#[pymodule]
fn tenhundred(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Engine>()?;
    m.add_class::<Token>()?;
    m.add_class::<Derivation>()?;
    m.add_class::<CheckResult>()?;
    m.add_class::<Annotation>()?;
    m.add_class::<FitReport>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_zeta, m)?)?;
    Ok(())
}
