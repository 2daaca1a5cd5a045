//! Discrete power-law fitting with KS-selected cutoff, a discrete
//! exponential (geometric) alternative, and a normalized likelihood-ratio
//! comparison between the two.

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::FitError;

pub const DEFAULT_THRESHOLD: f64 = 0.05;

/// Per-word occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSample {
    sorted: Vec<u64>,
}

impl CountSample {
    pub fn new(mut values: Vec<u64>) -> Result<Self, FitError> {
        if values.is_empty() {
            return Err(FitError::Empty);
        }
        if let Some(&bad) = values.iter().find(|v| **v == 0) {
            return Err(FitError::NonPositive(bad));
        }
        values.sort_unstable();
        Ok(CountSample { sorted: values })
    }

    pub fn values(&self) -> &[u64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Values `>= xmin`, ascending.
    pub fn tail(&self, xmin: u64) -> &[u64] {
        let start = self.sorted.partition_point(|v| *v < xmin);
        &self.sorted[start..]
    }

    fn distinct(&self) -> Vec<u64> {
        let mut d = self.sorted.clone();
        d.dedup();
        d
    }
}

// B_{2j} / (2j)!
const EM_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

/// Hurwitz zeta `sum_{k>=0} (q + k)^-s` for `s > 1`, `q > 0`: direct terms
/// until the argument reaches 16, then the Euler-Maclaurin tail. Relative
/// error is below 1e-12 over the range used here.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let mut sum = 0.0;
    let mut a = q;
    while a < 16.0 {
        sum += a.powf(-s);
        a += 1.0;
    }
    let a_s = a.powf(-s);
    sum += a * a_s / (s - 1.0) + 0.5 * a_s;
    // s (s+1) ... (s+2j-2) a^{-s-2j+1}
    let mut rising = s;
    let mut power = a_s / a;
    for (j, c) in EM_COEFFS.iter().enumerate() {
        let term = c * rising * power;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        power /= a * a;
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub xmin: u64,
    pub ks: f64,
    pub ntail: usize,
    /// Fewer than 10 sample values lie in the tail.
    pub small_tail: bool,
}

impl PowerLawFit {
    fn norm(&self) -> f64 {
        hurwitz_zeta(self.alpha, self.xmin as f64)
    }

    pub fn log_pmf(&self, x: u64) -> f64 {
        -self.alpha * (x as f64).ln() - self.norm().ln()
    }

    pub fn pmf(&self, x: u64) -> f64 {
        if x < self.xmin {
            0.0
        } else {
            self.log_pmf(x).exp()
        }
    }

    /// P(X <= x) for the fitted tail distribution.
    pub fn cdf(&self, x: u64) -> f64 {
        if x < self.xmin {
            0.0
        } else {
            1.0 - hurwitz_zeta(self.alpha, (x + 1) as f64) / self.norm()
        }
    }
}

struct Tail<'a> {
    values: &'a [u64],
    log_sum: f64,
}

fn log_likelihood(alpha: f64, xmin: u64, tail: &Tail) -> f64 {
    let n = tail.values.len() as f64;
    -n * hurwitz_zeta(alpha, xmin as f64).ln() - alpha * tail.log_sum
}

// Maximizes the (concave) log-likelihood in alpha by golden-section search,
// starting from the closed-form approximation.
fn estimate_alpha(xmin: u64, tail: &Tail) -> f64 {
    let n = tail.values.len() as f64;
    let denom = tail.log_sum - n * (xmin as f64 - 0.5).ln();
    let approx = 1.0 + n / denom;
    let f = |a: f64| log_likelihood(a, xmin, tail);
    let mut lo = (approx - 0.5).max(1.0 + 1e-6);
    let mut hi = approx + 0.5;
    while hi < 50.0 && f(hi) > f(hi - 1e-3) {
        hi += 1.0;
    }
    while lo > 1.0 + 1e-6 && f(lo) > f(lo + 1e-3) {
        lo = (lo - 0.5).max(1.0 + 1e-6);
    }
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-9 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    (lo + hi) / 2.0
}

// Sup distance between the empirical and fitted CDFs. Both are step
// functions on the integers, so it suffices to look at each observed value
// and the integer just before the next one.
fn ks_distance(fit: &PowerLawFit, tail: &[u64]) -> f64 {
    let n = tail.len() as f64;
    let mut ks: f64 = 0.0;
    if let Some(&first) = tail.first() {
        if first > fit.xmin {
            ks = fit.cdf(first - 1);
        }
    }
    let mut i = 0;
    while i < tail.len() {
        let v = tail[i];
        let mut j = i;
        while j < tail.len() && tail[j] == v {
            j += 1;
        }
        let emp = j as f64 / n;
        ks = ks.max((emp - fit.cdf(v)).abs());
        if j < tail.len() && tail[j] > v + 1 {
            ks = ks.max((emp - fit.cdf(tail[j] - 1)).abs());
        }
        i = j;
    }
    ks
}

/// Fits the power law with a fixed cutoff.
pub fn fit_power_law_at(sample: &CountSample, xmin: u64) -> Result<PowerLawFit, FitError> {
    let values = sample.tail(xmin.max(1));
    if values.len() < 2 || values.first() == values.last() {
        return Err(FitError::DegenerateTail {
            xmin,
            size: values.len(),
        });
    }
    let tail = Tail {
        values,
        log_sum: values.iter().map(|v| (*v as f64).ln()).sum(),
    };
    Ok(finish(xmin, &tail))
}

fn finish(xmin: u64, tail: &Tail) -> PowerLawFit {
    let alpha = estimate_alpha(xmin, tail);
    let mut fit = PowerLawFit {
        alpha,
        xmin,
        ks: 0.0,
        ntail: tail.values.len(),
        small_tail: tail.values.len() < 10,
    };
    fit.ks = ks_distance(&fit, tail.values);
    fit
}

/// Every candidate cutoff with its fit, ascending by xmin. A cutoff is a
/// candidate when at least two distinct values remain at or above it.
pub fn scan_xmin(sample: &CountSample) -> Result<Vec<PowerLawFit>, FitError> {
    let distinct = sample.distinct();
    if distinct.len() < 2 {
        return Err(FitError::Degenerate(distinct[0]));
    }
    let values = sample.values();
    // suffix sums of ln x
    let mut suffix = vec![0.0; values.len() + 1];
    for i in (0..values.len()).rev() {
        suffix[i] = suffix[i + 1] + (values[i] as f64).ln();
    }
    let mut fits = Vec::with_capacity(distinct.len() - 1);
    for &xmin in &distinct[..distinct.len() - 1] {
        let start = values.partition_point(|v| *v < xmin);
        let tail = Tail {
            values: &values[start..],
            log_sum: suffix[start],
        };
        fits.push(finish(xmin, &tail));
    }
    Ok(fits)
}

/// Fits a discrete power law, choosing the cutoff that minimizes the KS
/// distance (ties go to the smaller cutoff).
pub fn fit_power_law(sample: &CountSample) -> Result<PowerLawFit, FitError> {
    let fits = scan_xmin(sample)?;
    let mut best = fits[0];
    for fit in &fits[1..] {
        if fit.ks < best.ks {
            best = *fit;
        }
    }
    Ok(best)
}

/// Discrete exponential tail `p(x) = (1 - e^-rate) e^(-rate (x - xmin))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub rate: f64,
    pub xmin: u64,
    pub ntail: usize,
}

impl ExponentialFit {
    pub fn log_pmf(&self, x: u64) -> f64 {
        (-(-self.rate).exp_m1()).ln() - self.rate * (x - self.xmin) as f64
    }
}

/// Maximum-likelihood rate of the geometric tail at `xmin`.
pub fn fit_exponential(sample: &CountSample, xmin: u64) -> Result<ExponentialFit, FitError> {
    let tail = sample.tail(xmin);
    let degenerate = FitError::DegenerateTail {
        xmin,
        size: tail.len(),
    };
    if tail.len() < 2 {
        return Err(degenerate);
    }
    let excess = tail.iter().map(|v| (v - xmin) as f64).sum::<f64>() / tail.len() as f64;
    if excess == 0.0 {
        return Err(degenerate);
    }
    Ok(ExponentialFit {
        rate: (1.0 / excess).ln_1p(),
        xmin,
        ntail: tail.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preferred {
    PowerLaw,
    Exponential,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LrTestResult {
    /// Log-likelihood of the first model minus the second.
    pub ratio: f64,
    pub p_value: f64,
}

/// Vuong-style comparison of two per-point log-likelihood vectors. The
/// p-value is two-sided under the normal approximation of `ratio`.
pub fn compare_log_likelihoods(first: &[f64], second: &[f64]) -> LrTestResult {
    assert_eq!(first.len(), second.len());
    let n = first.len() as f64;
    let diffs: Vec<f64> = first.iter().zip(second).map(|(a, b)| a - b).collect();
    let ratio: f64 = diffs.iter().sum();
    let mean = ratio / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
    let p_value = if var > 0.0 {
        erfc(ratio.abs() / (2.0 * n * var).sqrt())
    } else if ratio == 0.0 {
        1.0
    } else {
        0.0
    };
    LrTestResult { ratio, p_value }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelComparison {
    pub ratio: f64,
    pub p_value: f64,
    pub preferred: Preferred,
}

/// Power law versus exponential on the shared tail.
pub fn likelihood_ratio_test(
    sample: &CountSample,
    power_law: &PowerLawFit,
    exponential: &ExponentialFit,
    threshold: f64,
) -> Result<ModelComparison, FitError> {
    if power_law.xmin != exponential.xmin {
        return Err(FitError::XminMismatch {
            power_law: power_law.xmin,
            exponential: exponential.xmin,
        });
    }
    let tail = sample.tail(power_law.xmin);
    let pl: Vec<f64> = tail.iter().map(|x| power_law.log_pmf(*x)).collect();
    let ex: Vec<f64> = tail.iter().map(|x| exponential.log_pmf(*x)).collect();
    let LrTestResult { ratio, p_value } = compare_log_likelihoods(&pl, &ex);
    let preferred = if p_value >= threshold {
        Preferred::Undecided
    } else if ratio > 0.0 {
        Preferred::PowerLaw
    } else {
        Preferred::Exponential
    };
    Ok(ModelComparison {
        ratio,
        p_value,
        preferred,
    })
}

/// Everything a fit report carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub alpha: f64,
    pub xmin: u64,
    pub ks: f64,
    pub ntail: usize,
    pub small_tail: bool,
    pub exponential_rate: f64,
    #[serde(rename = "R")]
    pub ratio: f64,
    #[serde(rename = "p")]
    pub p_value: f64,
    pub preferred: Preferred,
}

pub fn fit_report(sample: &CountSample, threshold: f64) -> Result<FitReport, FitError> {
    fit_report_at(sample, None, threshold)
}

/// As [`fit_report`], with the cutoff fixed instead of chosen by KS.
pub fn fit_report_at(sample: &CountSample, xmin: Option<u64>, threshold: f64) -> Result<FitReport, FitError> {
    let pl = match xmin {
        Some(x) => fit_power_law_at(sample, x)?,
        None => fit_power_law(sample)?,
    };
    let ex = fit_exponential(sample, pl.xmin)?;
    let lr = likelihood_ratio_test(sample, &pl, &ex, threshold)?;
    Ok(FitReport {
        alpha: pl.alpha,
        xmin: pl.xmin,
        ks: pl.ks,
        ntail: pl.ntail,
        small_tail: pl.small_tail,
        exponential_rate: ex.rate,
        ratio: lr.ratio,
        p_value: lr.p_value,
        preferred: lr.preferred,
    })
}
