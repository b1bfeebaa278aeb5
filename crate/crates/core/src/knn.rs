//! Emotion representation mapping by k-nearest-neighbor regression.
//!
//! Each target dimension gets its own regressor that sees the full source
//! rating vector as features. Since all regressors share features, metric and
//! `k`, they share one neighbor set per query; the per-dimension outputs are
//! still computed independently from the target columns.
//!
//! Neighbors are ranked by squared Euclidean distance (summed in dimension
//! order) with ties going to the lower training row. The prediction is the
//! unweighted mean of the neighbors' targets, summed nearest first.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::FormatDescriptor;
use crate::lexicon::{Direction, Entry, Lexicon, LexiconError, MergedLexicon};

pub const MODEL_SCHEMA: &str = "emomap/knn-model";
pub const MODEL_SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum KnnError {
    #[error("no training rows")]
    EmptyTraining,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("query has {found} values, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("query contains a non-finite value")]
    NonFinite,
    #[error("lexicon format `{found}` does not match model source format `{expected}`")]
    FormatMismatch { expected: String, found: String },
    #[error("training data disagree on formats")]
    MixedFormats,
    #[error("unsupported model schema version {found} (expected {MODEL_SCHEMA_VERSION})")]
    Version { found: u64 },
    #[error("invalid model file: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    source_format: FormatDescriptor,
    target_format: FormatDescriptor,
    requested_k: usize,
    k: usize,
    features: Vec<f64>,
    targets: Vec<f64>,
    rows: usize,
    provenance: String,
}

impl KnnModel {
    /// Stores one slice of `data` as features and the other as targets.
    pub fn fit(data: &MergedLexicon, direction: Direction, k: usize) -> Result<Self, KnnError> {
        Self::fit_many(&[data], direction, k)
    }

    /// Fits on the row concatenation of several gold sets sharing formats.
    pub fn fit_many(data: &[&MergedLexicon], direction: Direction, k: usize) -> Result<Self, KnnError> {
        let first = data.first().ok_or(KnnError::EmptyTraining)?;
        if data.iter().any(|d| !d.same_formats(first)) {
            return Err(KnnError::MixedFormats);
        }
        let (src, tgt) = first.slices(direction);
        let (mut features, mut targets) = (Vec::new(), Vec::new());
        for d in data {
            let (s, t) = d.slices(direction);
            features.extend(s.entries().iter().flat_map(|e| e.ratings.iter().copied()));
            targets.extend(t.entries().iter().flat_map(|e| e.ratings.iter().copied()));
        }
        let rows: usize = data.iter().map(|d| d.len()).sum();
        let provenance = format!("{rows} rows, {} -> {}", src.format().name(), tgt.format().name());
        Self::from_flat(src.format().clone(), tgt.format().clone(), features, targets, k, provenance)
    }

    /// Builds a model from row-major matrices.
    pub fn from_flat(
        source_format: FormatDescriptor,
        target_format: FormatDescriptor,
        features: Vec<f64>,
        targets: Vec<f64>,
        k: usize,
        provenance: String,
    ) -> Result<Self, KnnError> {
        if k == 0 {
            return Err(KnnError::ZeroK);
        }
        let (ds, dt) = (source_format.len(), target_format.len());
        if !features.len().is_multiple_of(ds)
            || !targets.len().is_multiple_of(dt)
            || features.len() / ds != targets.len() / dt
        {
            return Err(KnnError::Schema(format!(
                "feature matrix ({} values / {ds} columns) and target matrix ({} values / {dt} columns) disagree",
                features.len(),
                targets.len()
            )));
        }
        let rows = features.len() / ds;
        if rows == 0 {
            return Err(KnnError::EmptyTraining);
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(KnnError::Schema("non-finite training feature".into()));
        }
        if targets.iter().any(|&v| !v.is_finite() || !target_format.contains(v)) {
            return Err(KnnError::Schema("training target outside the target scale".into()));
        }
        Ok(Self { source_format, target_format, requested_k: k, k: k.min(rows), features, targets, rows, provenance })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn source_format(&self) -> &FormatDescriptor {
        &self.source_format
    }

    pub fn target_format(&self) -> &FormatDescriptor {
        &self.target_format
    }

    /// Effective `k`, i.e. `min(requested, rows)`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn requested_k(&self) -> usize {
        self.requested_k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn feature_row(&self, i: usize) -> &[f64] {
        let d = self.source_format.len();
        &self.features[i * d..(i + 1) * d]
    }

    pub fn target_row(&self, i: usize) -> &[f64] {
        let d = self.target_format.len();
        &self.targets[i * d..(i + 1) * d]
    }

    fn check_query(&self, query: &[f64]) -> Result<(), KnnError> {
        if query.len() != self.source_format.len() {
            return Err(KnnError::DimensionMismatch { expected: self.source_format.len(), found: query.len() });
        }
        if query.iter().any(|v| !v.is_finite()) {
            return Err(KnnError::NonFinite);
        }
        Ok(())
    }

    /// Indices of the `k` nearest training rows, nearest first.
    pub fn neighbors(&self, query: &[f64]) -> Result<Vec<usize>, KnnError> {
        self.check_query(query)?;
        let mut dist: Vec<(f64, usize)> = (0..self.rows)
            .map(|i| {
                let d2 = self.feature_row(i).iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
                (d2, i)
            })
            .collect();
        let order = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < dist.len() {
            dist.select_nth_unstable_by(self.k - 1, order);
            dist.truncate(self.k);
        }
        dist.sort_unstable_by(order);
        Ok(dist.into_iter().map(|(_, i)| i).collect())
    }

    /// One output per target dimension, each the mean of the neighbors' values.
    pub fn predict(&self, query: &[f64]) -> Result<Vec<f64>, KnnError> {
        let neighbors = self.neighbors(query)?;
        let k = neighbors.len() as f64;
        let out = (0..self.target_format.len())
            .map(|j| {
                let sum: f64 = neighbors.iter().map(|&i| self.target_row(i)[j]).sum();
                self.target_format.clamp(sum / k)
            })
            .collect();
        Ok(out)
    }

    /// Predicts every row, preserving order. Rows run in parallel.
    pub fn predict_many(&self, queries: &[&[f64]]) -> Result<Vec<Vec<f64>>, KnnError> {
        queries.par_iter().map(|q| self.predict(q)).collect()
    }

    /// Rates every word of a source-format lexicon in the target format.
    pub fn map_lexicon(&self, lex: &Lexicon) -> Result<Lexicon, KnnError> {
        if !lex.format().same_dimensions(&self.source_format) {
            return Err(KnnError::FormatMismatch {
                expected: self.source_format.to_string(),
                found: lex.format().to_string(),
            });
        }
        let entries: Vec<Entry> = lex
            .entries()
            .par_iter()
            .map(|e| self.predict(&e.ratings).map(|ratings| Entry { word: e.word.clone(), ratings }))
            .collect::<Result<_, _>>()?;
        let out = Lexicon::new(self.target_format.clone(), entries)?;
        Ok(match lex.language() {
            Some(tag) => out.with_language(tag),
            None => out,
        })
    }

    pub fn save<W: Write>(&self, out: W) -> Result<(), KnnError> {
        let file = ModelFile {
            schema: MODEL_SCHEMA.to_string(),
            schema_version: MODEL_SCHEMA_VERSION,
            k: self.requested_k,
            effective_k: self.k,
            source_format: self.source_format.clone(),
            target_format: self.target_format.clone(),
            provenance: self.provenance.clone(),
            train_features: self.features.chunks(self.source_format.len()).map(<[f64]>::to_vec).collect(),
            train_targets: self.targets.chunks(self.target_format.len()).map(<[f64]>::to_vec).collect(),
        };
        serde_json::to_writer_pretty(out, &file).map_err(|e| KnnError::Io(e.into()))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.save(&mut out).expect("writing to a Vec cannot fail");
        out.push(b'\n');
        out
    }

    pub fn load<R: Read>(input: R) -> Result<Self, KnnError> {
        let value: serde_json::Value = serde_json::from_reader(input).map_err(|e| KnnError::Schema(e.to_string()))?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(MODEL_SCHEMA) => {}
            other => return Err(KnnError::Schema(format!("schema tag {other:?}, expected {MODEL_SCHEMA:?}"))),
        }
        let version = value
            .get("schema_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| KnnError::Schema("missing schema_version".into()))?;
        if version != MODEL_SCHEMA_VERSION {
            return Err(KnnError::Version { found: version });
        }
        let file: ModelFile = serde_json::from_value(value).map_err(|e| KnnError::Schema(e.to_string()))?;
        let (ds, dt) = (file.source_format.len(), file.target_format.len());
        if file.train_features.iter().any(|r| r.len() != ds) || file.train_targets.iter().any(|r| r.len() != dt) {
            return Err(KnnError::Schema("matrix row width does not match its format".into()));
        }
        let model = Self::from_flat(
            file.source_format,
            file.target_format,
            file.train_features.concat(),
            file.train_targets.concat(),
            file.k,
            file.provenance,
        )?;
        if model.k != file.effective_k {
            return Err(KnnError::Schema(format!(
                "effective_k {} inconsistent with k and row count",
                file.effective_k
            )));
        }
        Ok(model)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema: String,
    schema_version: u64,
    k: usize,
    effective_k: usize,
    source_format: FormatDescriptor,
    target_format: FormatDescriptor,
    provenance: String,
    train_features: Vec<Vec<f64>>,
    train_targets: Vec<Vec<f64>>,
}
