//! Correlation and significance machinery.
//!
//! Pearson's r, inter-study reliability (ISR) between two rating studies,
//! per-dimension ISR floors, a one-sample t-test over cross-validation folds
//! and Fisher-z tests on correlations. All tests are one-tailed in the upper
//! direction: they ask whether the method *exceeds* the comparison value.

pub mod reference;
pub mod special;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::canonical_name;
use crate::lexicon::{align, Lexicon, LexiconError, MatchPolicy};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("{which} series has zero variance")]
    ZeroVariance { which: &'static str },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("correlation {0} has no Fisher transform (|r| must be < 1)")]
    UnitCorrelation(f64),
    #[error("sample size {0} too small for a Fisher z-test (need n > 3)")]
    SampleTooSmall(usize),
    #[error("lexicons share no dimension")]
    NoSharedDimensions,
    #[error("only {0} overlapping words, need at least 2")]
    InsufficientOverlap(usize),
    #[error("no ISR value supplied for dimension `{0}`")]
    MissingDimension(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
}

/// Sample Pearson correlation, two-pass.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(StatsError::TooShort { needed: 2, got: n });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    if is_constant(x) {
        return Err(StatsError::ZeroVariance { which: "first" });
    }
    if is_constant(y) {
        return Err(StatsError::ZeroVariance { which: "second" });
    }
    let mean_x = mean(x);
    let mean_y = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance { which: "first" });
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance { which: "second" });
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(CorrelationResult { r: r.clamp(-1.0, 1.0), n })
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased (n - 1) sample standard deviation.
pub(crate) fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (v.len() as f64 - 1.0)).sqrt()
}

/// Per-dimension correlation between two studies over their shared words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsrResult {
    pub label: String,
    pub overlap: usize,
    pub dimensions: Vec<(String, CorrelationResult)>,
}

impl IsrResult {
    pub fn get(&self, dimension: &str) -> Option<&CorrelationResult> {
        let key = canonical_name(dimension);
        self.dimensions.iter().find(|(d, _)| canonical_name(d) == key).map(|(_, c)| c)
    }
}

/// Inter-study reliability: Pearson per shared dimension over the aligned overlap.
///
/// Dimensions are reported in `a`'s order.
pub fn isr(a: &Lexicon, b: &Lexicon, policy: MatchPolicy) -> Result<IsrResult, StatsError> {
    let shared: Vec<(usize, usize, &str)> = a
        .format()
        .dimensions()
        .iter()
        .enumerate()
        .filter_map(|(ia, d)| b.format().dimension_index(d).map(|ib| (ia, ib, d.as_str())))
        .collect();
    if shared.is_empty() {
        return Err(StatsError::NoSharedDimensions);
    }
    let pairs = align(a, b, policy)?;
    if pairs.len() < 2 {
        return Err(StatsError::InsufficientOverlap(pairs.len()));
    }
    let mut dimensions = Vec::with_capacity(shared.len());
    for (ia, ib, name) in shared {
        let x: Vec<f64> = pairs.iter().map(|&(i, _)| a.entries()[i].ratings[ia]).collect();
        let y: Vec<f64> = pairs.iter().map(|&(_, j)| b.entries()[j].ratings[ib]).collect();
        dimensions.push((name.to_string(), pearson(&x, &y)?));
    }
    Ok(IsrResult { label: String::new(), overlap: pairs.len(), dimensions })
}

/// Comparison value for one dimension. `n = None` marks a fixed reference
/// value with no sampling error of its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Floor {
    pub dimension: String,
    pub r: f64,
    pub n: Option<usize>,
    pub source: String,
}

/// Per-dimension minimum ISR across study pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsrFloor {
    pub floors: Vec<Floor>,
}

impl IsrFloor {
    pub fn get(&self, dimension: &str) -> Option<&Floor> {
        let key = canonical_name(dimension);
        self.floors.iter().find(|f| canonical_name(&f.dimension) == key)
    }

    pub fn r(&self, dimension: &str) -> Option<f64> {
        self.get(dimension).map(|f| f.r)
    }

    /// Same values, treated as fixed reference points in significance tests.
    pub fn as_fixed(&self) -> IsrFloor {
        IsrFloor { floors: self.floors.iter().map(|f| Floor { n: None, ..f.clone() }).collect() }
    }
}

/// Minimum correlation per dimension over all pairs.
///
/// With an empty `dimensions` list every dimension seen in any pair is
/// reported, in order of first appearance. Dimensions absent from every pair
/// are an error when requested and omitted otherwise.
pub fn isr_floor(results: &[IsrResult], dimensions: &[&str]) -> Result<IsrFloor, StatsError> {
    let mut wanted: Vec<String> = dimensions.iter().map(|d| d.to_string()).collect();
    if wanted.is_empty() {
        for res in results {
            for (d, _) in &res.dimensions {
                if !wanted.iter().any(|w| canonical_name(w) == canonical_name(d)) {
                    wanted.push(d.clone());
                }
            }
        }
    }
    let mut floors = Vec::with_capacity(wanted.len());
    for dim in wanted {
        let mut best: Option<(f64, usize, &str)> = None;
        for res in results {
            if let Some(c) = res.get(&dim) {
                if best.is_none_or(|(r, _, _)| c.r < r) {
                    best = Some((c.r, c.n, res.label.as_str()));
                }
            }
        }
        let (r, n, label) = best.ok_or_else(|| StatsError::MissingDimension(dim.clone()))?;
        floors.push(Floor { dimension: dim, r, n: Some(n), source: label.to_string() });
    }
    Ok(IsrFloor { floors })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p: f64,
}

impl TestOutcome {
    pub fn significant(&self, alpha: f64) -> bool {
        self.p < alpha
    }
}

/// One-sample, one-tailed (upper) t-test of `mean(samples) > mu0`.
pub fn t_test_one_sample_one_tailed(samples: &[f64], mu0: f64) -> Result<TestOutcome, StatsError> {
    let n = samples.len();
    if n < 2 {
        return Err(StatsError::TooShort { needed: 2, got: n });
    }
    if samples.iter().any(|v| !v.is_finite()) || !mu0.is_finite() {
        return Err(StatsError::NonFinite);
    }
    if is_constant(samples) {
        return Err(StatsError::ZeroVariance { which: "sample" });
    }
    let sd = sample_sd(samples);
    if sd == 0.0 {
        return Err(StatsError::ZeroVariance { which: "sample" });
    }
    let t = (mean(samples) - mu0) / (sd / (n as f64).sqrt());
    let p = special::student_t_upper_tail(t, (n - 1) as f64);
    Ok(TestOutcome { statistic: t, p })
}

/// Fisher z-transform, `atanh(r)`.
pub fn fisher_z(r: f64) -> Result<f64, StatsError> {
    if !r.is_finite() {
        return Err(StatsError::NonFinite);
    }
    if r.abs() >= 1.0 {
        return Err(StatsError::UnitCorrelation(r));
    }
    Ok(r.atanh())
}

/// One-tailed (upper) z-test of `r1 > r2` for correlations from independent samples.
pub fn z_test_correlations_one_tailed(r1: f64, n1: usize, r2: f64, n2: usize) -> Result<TestOutcome, StatsError> {
    let (z1, z2) = (fisher_z(r1)?, fisher_z(r2)?);
    for n in [n1, n2] {
        if n <= 3 {
            return Err(StatsError::SampleTooSmall(n));
        }
    }
    let se = (1.0 / (n1 - 3) as f64 + 1.0 / (n2 - 3) as f64).sqrt();
    let z = (z1 - z2) / se;
    Ok(TestOutcome { statistic: z, p: special::normal_upper_tail(z) })
}

/// One-tailed (upper) z-test of `r > rho0` where `rho0` is a fixed value.
///
/// This is the two-sample test with the second sample size taken to infinity.
pub fn z_test_against_fixed(r: f64, n: usize, rho0: f64) -> Result<TestOutcome, StatsError> {
    let (z1, z0) = (fisher_z(r)?, fisher_z(rho0)?);
    if n <= 3 {
        return Err(StatsError::SampleTooSmall(n));
    }
    let z = (z1 - z0) * ((n - 3) as f64).sqrt();
    Ok(TestOutcome { statistic: z, p: special::normal_upper_tail(z) })
}
