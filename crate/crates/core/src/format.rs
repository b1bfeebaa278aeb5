//! Emotion representation formats: named dimensions sharing one rating scale.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("format `{0}` has no dimensions")]
    NoDimensions(String),
    #[error("format `{format}` lists dimension `{dimension}` twice")]
    DuplicateDimension { format: String, dimension: String },
    #[error("format `{format}`: scale_min {min} must be below scale_max {max}")]
    BadScale { format: String, min: f64, max: f64 },
    #[error("cannot parse format `{0}` (expected a preset name, `preset:min:max` or `name:dim1,dim2,...:min:max`)")]
    Syntax(String),
}

/// Name and scale of an emotion representation, e.g. VAD on `[1, 9]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFormat")]
pub struct FormatDescriptor {
    name: String,
    dimensions: Vec<String>,
    scale_min: f64,
    scale_max: f64,
}

#[derive(Deserialize)]
struct RawFormat {
    name: String,
    dimensions: Vec<String>,
    scale_min: f64,
    scale_max: f64,
}

impl TryFrom<RawFormat> for FormatDescriptor {
    type Error = FormatError;

    fn try_from(raw: RawFormat) -> Result<Self, Self::Error> {
        Self::new(raw.name, raw.dimensions, raw.scale_min, raw.scale_max)
    }
}

impl FormatDescriptor {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        dimensions: impl IntoIterator<Item = S>,
        scale_min: f64,
        scale_max: f64,
    ) -> Result<Self, FormatError> {
        let name = name.into();
        let dimensions: Vec<String> = dimensions.into_iter().map(Into::into).collect();
        if dimensions.is_empty() {
            return Err(FormatError::NoDimensions(name));
        }
        let mut seen = HashSet::new();
        for d in &dimensions {
            if !seen.insert(canonical_name(d)) {
                return Err(FormatError::DuplicateDimension { format: name, dimension: d.clone() });
            }
        }
        // NaN bounds fail this comparison as well.
        if !scale_min.is_finite() || !scale_max.is_finite() || scale_min >= scale_max {
            return Err(FormatError::BadScale { format: name, min: scale_min, max: scale_max });
        }
        Ok(Self { name, dimensions, scale_min, scale_max })
    }

    /// Valence, Arousal, Dominance on `[1, 9]`.
    pub fn vad() -> Self {
        Self::new("vad", ["valence", "arousal", "dominance"], 1.0, 9.0).unwrap()
    }

    /// Valence and Arousal on `[1, 9]`.
    pub fn va() -> Self {
        Self::new("va", ["valence", "arousal"], 1.0, 9.0).unwrap()
    }

    /// The five basic emotions on `[1, 5]`.
    pub fn be5() -> Self {
        Self::new("be5", ["joy", "anger", "sadness", "fear", "disgust"], 1.0, 5.0).unwrap()
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "vad" => Some(Self::vad()),
            "va" => Some(Self::va()),
            "be5" => Some(Self::be5()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimensions(&self) -> &[String] {
        &self.dimensions
    }

    pub fn len(&self) -> usize {
        self.dimensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dimensions.is_empty()
    }

    pub fn scale_min(&self) -> f64 {
        self.scale_min
    }

    pub fn scale_max(&self) -> f64 {
        self.scale_max
    }

    pub fn dimension_index(&self, name: &str) -> Option<usize> {
        let key = canonical_name(name);
        self.dimensions.iter().position(|d| canonical_name(d) == key)
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.scale_min && value <= self.scale_max
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.scale_min, self.scale_max)
    }

    /// Same dimension names in the same order, bounds ignored.
    pub fn same_dimensions(&self, other: &Self) -> bool {
        self.dimensions.len() == other.dimensions.len()
            && self.dimensions.iter().zip(&other.dimensions).all(|(a, b)| canonical_name(a) == canonical_name(b))
    }

    pub fn shares_dimension_with(&self, other: &Self) -> Option<&str> {
        let theirs: HashSet<String> = other.dimensions.iter().map(|d| canonical_name(d)).collect();
        self.dimensions.iter().find(|d| theirs.contains(&canonical_name(d))).map(String::as_str)
    }

    /// Copy of this descriptor with different bounds.
    pub fn with_scale(&self, scale_min: f64, scale_max: f64) -> Result<Self, FormatError> {
        Self::new(self.name.clone(), self.dimensions.clone(), scale_min, scale_max)
    }
}

/// Dimension names compare trimmed and lowercased.
pub fn canonical_name(name: &str) -> String {
    name.trim().to_lowercase()
}

impl fmt::Display for FormatDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.dimensions.join(","), self.scale_min, self.scale_max)
    }
}

impl FromStr for FormatDescriptor {
    type Err = FormatError;

    /// Accepts `vad`, `be5:0:1` (preset with other bounds) or `name:d1,d2:min:max`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || FormatError::Syntax(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let bound = |t: &str| t.trim().parse::<f64>().map_err(|_| syntax());
        match parts.as_slice() {
            [name] => Self::preset(name).ok_or_else(syntax),
            [name, min, max] => Self::preset(name).ok_or_else(syntax)?.with_scale(bound(min)?, bound(max)?),
            [name, dims, min, max] => {
                let dims: Vec<&str> = dims.split(',').map(str::trim).collect();
                if name.trim().is_empty() || dims.iter().any(|d| d.is_empty()) {
                    return Err(syntax());
                }
                Self::new(name.trim(), dims, bound(min)?, bound(max)?)
            }
            _ => Err(syntax()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let vad = FormatDescriptor::vad();
        assert_eq!(vad.len(), 3);
        assert_eq!((vad.scale_min(), vad.scale_max()), (1.0, 9.0));
        assert_eq!(FormatDescriptor::va().len(), 2);
        let be5 = FormatDescriptor::be5();
        assert_eq!(be5.dimensions()[4], "disgust");
        assert_eq!((be5.scale_min(), be5.scale_max()), (1.0, 5.0));
        assert!(vad.shares_dimension_with(&be5).is_none());
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(matches!(
            FormatDescriptor::new("x", Vec::<String>::new(), 1.0, 2.0),
            Err(FormatError::NoDimensions(_))
        ));
        assert!(matches!(
            FormatDescriptor::new("x", ["a", "A "], 1.0, 2.0),
            Err(FormatError::DuplicateDimension { .. })
        ));
        assert!(matches!(FormatDescriptor::new("x", ["a"], 2.0, 2.0), Err(FormatError::BadScale { .. })));
        assert!(matches!(FormatDescriptor::new("x", ["a"], f64::NAN, 2.0), Err(FormatError::BadScale { .. })));
    }

    #[test]
    fn parses_from_str() {
        assert_eq!("VAD".parse::<FormatDescriptor>().unwrap(), FormatDescriptor::vad());
        let v7: FormatDescriptor = "vad:1:7".parse().unwrap();
        assert_eq!(v7.scale_max(), 7.0);
        assert!(v7.same_dimensions(&FormatDescriptor::vad()));
        let custom: FormatDescriptor = "pa:pleasure,activation:-1:1".parse().unwrap();
        assert_eq!(custom.dimensions(), ["pleasure", "activation"]);
        assert_eq!(custom.to_string().parse::<FormatDescriptor>().unwrap(), custom);
        assert!("nope".parse::<FormatDescriptor>().is_err());
        assert!("x:a,,b:1:2".parse::<FormatDescriptor>().is_err());
    }
}
