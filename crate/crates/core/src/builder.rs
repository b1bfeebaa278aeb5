//! Constructing new lexicons with a trained model, and descriptive reports
//! over the result: summary statistics, top-k words per dimension and
//! cross-format correlation matrices.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::render::format_r;
use crate::format::canonical_name;
use crate::knn::{KnnError, KnnModel};
use crate::lexicon::{align, Lexicon, LexiconError, MatchPolicy};
use crate::stats::{self, pearson, StatsError};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Knn(#[from] KnnError),
    #[error("lexicon is empty")]
    Empty,
    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),
    #[error("k = {k} exceeds lexicon size {len}")]
    KTooLarge { k: usize, len: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("only {0} overlapping words, need at least 2")]
    InsufficientOverlap(usize),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Record written beside every constructed lexicon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildManifest {
    pub input_path: Option<String>,
    pub input_format: String,
    pub output_path: Option<String>,
    pub output_format: String,
    pub model_provenance: String,
    pub model_k: usize,
    pub output_rows: usize,
    /// Newly rated entries per output format.
    pub new_entries: BTreeMap<String, usize>,
    /// Whether `new_entries` excludes words of the training gold set.
    pub counting: String,
    pub excluded_words: usize,
    pub timestamp: String,
    pub toolkit_version: String,
}

impl BuildManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

/// RFC 3339 build time. Honors `SOURCE_DATE_EPOCH` so reproducible builds
/// produce identical manifests.
pub fn build_timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse::<i64>().ok());
    let time = match fixed.and_then(|secs| chrono::DateTime::from_timestamp(secs, 0)) {
        Some(t) => t,
        None => chrono::Utc::now(),
    };
    time.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Rates every input word in the model's target format.
///
/// With an `exclude` vocabulary (the training gold words), the manifest
/// counts only words outside it as newly rated; the output lexicon always
/// keeps every input row in order.
pub fn build(
    lex: &Lexicon,
    model: &KnnModel,
    exclude: Option<&HashSet<String>>,
) -> Result<(Lexicon, BuildManifest), BuildError> {
    let out = model.map_lexicon(lex)?;
    let (count, counting, excluded) = match exclude {
        Some(vocab) => {
            let excluded = out.words().filter(|w| vocab.contains(*w)).count();
            (out.len() - excluded, "previously unrated (training gold words excluded)".to_string(), excluded)
        }
        None => (out.len(), "raw (no gold exclusion)".to_string(), 0),
    };
    let manifest = BuildManifest {
        input_path: None,
        input_format: lex.format().to_string(),
        output_path: None,
        output_format: out.format().to_string(),
        model_provenance: model.provenance().to_string(),
        model_k: model.k(),
        output_rows: out.len(),
        new_entries: BTreeMap::from([(out.format().name().to_string(), count)]),
        counting,
        excluded_words: excluded,
        timestamp: build_timestamp(),
        toolkit_version: TOOLKIT_VERSION.to_string(),
    };
    Ok((out, manifest))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub dimension: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// Unbiased (n - 1) standard deviation; `None` for a single entry.
    pub sd: Option<f64>,
}

/// Per-dimension mean, median, extremes and sample SD.
pub fn describe(lex: &Lexicon) -> Result<Vec<Summary>, BuildError> {
    if lex.is_empty() {
        return Err(BuildError::Empty);
    }
    let n = lex.len();
    Ok(lex
        .format()
        .dimensions()
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let mut col = lex.column(j);
            col.sort_by(f64::total_cmp);
            let median = if n % 2 == 1 { col[n / 2] } else { (col[n / 2 - 1] + col[n / 2]) / 2.0 };
            Summary {
                dimension: name.clone(),
                n,
                mean: stats::mean(&col),
                median,
                min: col[0],
                max: col[n - 1],
                sd: (n >= 2).then(|| stats::sample_sd(&col)),
            }
        })
        .collect())
}

/// The `k` highest-rated words on one dimension, descending; ties keep lexicon order.
pub fn top_k(lex: &Lexicon, dimension: &str, k: usize) -> Result<Vec<(String, f64)>, BuildError> {
    let j = lex.format().dimension_index(dimension).ok_or_else(|| BuildError::UnknownDimension(dimension.into()))?;
    if k == 0 {
        return Err(BuildError::ZeroK);
    }
    if k > lex.len() {
        return Err(BuildError::KTooLarge { k, len: lex.len() });
    }
    let mut idx: Vec<usize> = (0..lex.len()).collect();
    // stable sort keeps earlier rows first among equals
    idx.sort_by(|&a, &b| lex.entries()[b].ratings[j].total_cmp(&lex.entries()[a].ratings[j]));
    Ok(idx[..k].iter().map(|&i| (lex.entries()[i].word.clone(), lex.entries()[i].ratings[j])).collect())
}

/// Symmetric matrix of Pearson r over all dimensions of two aligned lexicons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub dimensions: Vec<String>,
    pub overlap: usize,
    /// `None` where a column is constant.
    pub cells: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let pos = |n: &str| self.dimensions.iter().position(|d| canonical_name(d) == canonical_name(n));
        self.cells[pos(a)?][pos(b)?]
    }
}

/// Correlations over the union of both lexicons' dimensions (`a`'s first;
/// names already in `a` are not repeated).
pub fn cross_corr(a: &Lexicon, b: &Lexicon, policy: MatchPolicy) -> Result<CorrelationMatrix, BuildError> {
    let pairs = align(a, b, policy)?;
    if pairs.len() < 2 {
        return Err(BuildError::InsufficientOverlap(pairs.len()));
    }
    let mut names = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (j, d) in a.format().dimensions().iter().enumerate() {
        names.push(d.clone());
        columns.push(pairs.iter().map(|&(i, _)| a.entries()[i].ratings[j]).collect());
    }
    for (j, d) in b.format().dimensions().iter().enumerate() {
        if a.format().dimension_index(d).is_none() {
            names.push(d.clone());
            columns.push(pairs.iter().map(|&(_, i)| b.entries()[i].ratings[j]).collect());
        }
    }
    let m = names.len();
    let mut cells = vec![vec![None; m]; m];
    for i in 0..m {
        cells[i][i] = Some(1.0);
        for k in i + 1..m {
            let r = match pearson(&columns[i], &columns[k]) {
                Ok(c) => Some(c.r),
                Err(StatsError::ZeroVariance { .. }) => None,
                Err(e) => unreachable!("aligned columns of equal length >= 2: {e}"),
            };
            cells[i][k] = r;
            cells[k][i] = r;
        }
    }
    Ok(CorrelationMatrix { dimensions: names, overlap: pairs.len(), cells })
}

fn table(rows: Vec<Vec<String>>) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

/// Rows Mean/Median/Min/Max/StDev, one column per dimension, two decimals.
pub fn render_summary(summary: &[Summary]) -> String {
    let mut rows = vec![std::iter::once(String::new()).chain(summary.iter().map(|s| s.dimension.clone())).collect()];
    let stat = |label: &str, f: &dyn Fn(&Summary) -> Option<f64>| -> Vec<String> {
        std::iter::once(label.to_string())
            .chain(summary.iter().map(|s| f(s).map_or("n/a".into(), |v| format!("{v:.2}"))))
            .collect()
    };
    rows.push(stat("Mean", &|s| Some(s.mean)));
    rows.push(stat("Median", &|s| Some(s.median)));
    rows.push(stat("Min", &|s| Some(s.min)));
    rows.push(stat("Max", &|s| Some(s.max)));
    rows.push(stat("StDev", &|s| s.sd));
    let mut out = format!(
        "# n={} (StDev uses the n-1 denominator; median of even n averages the two middle values)\n",
        summary.first().map_or(0, |s| s.n)
    );
    out.push_str(&table(rows));
    out
}

/// One column per dimension, ranks down the rows.
pub fn render_top_k(columns: &[(String, Vec<(String, f64)>)]) -> String {
    let depth = columns.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let mut rows = vec![std::iter::once("#".to_string()).chain(columns.iter().map(|(d, _)| d.clone())).collect()];
    for rank in 0..depth {
        let mut row = vec![(rank + 1).to_string()];
        row.extend(columns.iter().map(|(_, c)| c.get(rank).map_or(String::new(), |(w, _)| w.clone())));
        rows.push(row);
    }
    table(rows)
}

/// Upper triangle with signed values (`+.92`, `-.83`); `-` elsewhere.
pub fn render_corr(m: &CorrelationMatrix) -> String {
    let mut rows = vec![std::iter::once(String::new()).chain(m.dimensions.iter().cloned()).collect::<Vec<_>>()];
    for (i, name) in m.dimensions.iter().enumerate() {
        let mut row = vec![name.clone()];
        for k in 0..m.dimensions.len() {
            row.push(if k <= i {
                "-".into()
            } else {
                match m.cells[i][k] {
                    Some(r) if r >= 0.0 => format!("+{}", format_r(Some(r)).trim_start_matches('+')),
                    other => format_r(other),
                }
            });
        }
        rows.push(row);
    }
    format!("# overlap={}\n{}", m.overlap, table(rows))
}
