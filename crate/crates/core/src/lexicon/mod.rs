//! Word-level emotion lexicons: one rating vector per word under a single format.
//!
//! Entry order is preserved exactly as constructed or read. Everything
//! downstream (intersection, training rows, fold assignment, reports) iterates
//! in that order, which is what makes runs reproducible.

mod merge;
mod tsv;

use std::borrow::Cow;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{FormatDescriptor, FormatError};

pub use merge::{align, intersect, Direction, MergedLexicon};
pub use tsv::{
    parse_lexicon, parse_merged, write_lexicon, write_lexicon_to, write_merged, write_merged_to, DuplicatePolicy,
    ParseOptions, RangePolicy,
};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: not valid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: header mismatch: {message}")]
    HeaderMismatch { line: usize, message: String },
    #[error("line {line}: expected {expected} tab-separated columns, found {found}")]
    MalformedRow { line: usize, expected: usize, found: usize },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
    #[error("line {line}: missing rating for `{dimension}`")]
    MissingRating { line: usize, dimension: String },
    #[error("line {line}: rating `{value}` for `{dimension}` is not a number")]
    NonNumeric { line: usize, dimension: String, value: String },
    #[error("line {line}: rating `{value}` for `{dimension}` is not finite")]
    NonFinite { line: usize, dimension: String, value: String },
    #[error("line {line}: rating {value} for `{dimension}` outside [{min}, {max}]")]
    OutOfRange { line: usize, dimension: String, value: f64, min: f64, max: f64 },
    #[error("line {line}: duplicate word `{word}` (first seen on line {first_line})")]
    DuplicateWord { line: usize, word: String, first_line: usize },
    #[error("entry `{word}` has {found} ratings, format `{format}` needs {expected}")]
    RatingCount { word: String, format: String, expected: usize, found: usize },
    #[error("entry `{word}`: rating {value} for `{dimension}` is invalid for [{min}, {max}]")]
    InvalidRating { word: String, dimension: String, value: f64, min: f64, max: f64 },
    #[error("word {word:?} is empty or contains a tab or newline")]
    InvalidWord { word: String },
    #[error("word `{word}` occurs twice")]
    Duplicate { word: String },
    #[error("dimension mismatch: `{expected}` vs `{found}`")]
    DimensionMismatch { expected: String, found: String },
    #[error("both formats define dimension `{dimension}`")]
    DimensionCollision { dimension: String },
    #[error("words `{first}` and `{second}` normalize to the same key `{key}`")]
    KeyCollision { first: String, second: String, key: String },
    #[error("merged slices disagree: {0}")]
    MergedShape(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub word: String,
    pub ratings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    format: FormatDescriptor,
    entries: Vec<Entry>,
    language: Option<String>,
}

impl Lexicon {
    /// Validates rating counts, bounds, finiteness and word uniqueness.
    pub fn new(format: FormatDescriptor, entries: Vec<Entry>) -> Result<Self, LexiconError> {
        let mut seen: HashMap<&str, ()> = HashMap::with_capacity(entries.len());
        for e in &entries {
            check_word(&e.word)?;
            if e.ratings.len() != format.len() {
                return Err(LexiconError::RatingCount {
                    word: e.word.clone(),
                    format: format.name().to_string(),
                    expected: format.len(),
                    found: e.ratings.len(),
                });
            }
            for (dim, &v) in format.dimensions().iter().zip(&e.ratings) {
                if !v.is_finite() || !format.contains(v) {
                    return Err(LexiconError::InvalidRating {
                        word: e.word.clone(),
                        dimension: dim.clone(),
                        value: v,
                        min: format.scale_min(),
                        max: format.scale_max(),
                    });
                }
            }
            if seen.insert(e.word.as_str(), ()).is_some() {
                return Err(LexiconError::Duplicate { word: e.word.clone() });
            }
        }
        Ok(Self { format, entries, language: None })
    }

    pub fn empty(format: FormatDescriptor) -> Self {
        Self { format, entries: Vec::new(), language: None }
    }

    pub fn with_language(mut self, tag: impl Into<String>) -> Self {
        self.language = Some(tag.into());
        self
    }

    pub fn format(&self) -> &FormatDescriptor {
        &self.format
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.entries.iter().map(|e| e.word.as_str())
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.entries.iter().find(|e| e.word == word).map(|e| e.ratings.as_slice())
    }

    /// All ratings for one dimension, in entry order.
    pub fn column(&self, dim: usize) -> Vec<f64> {
        self.entries.iter().map(|e| e.ratings[dim]).collect()
    }

    pub fn into_entries(self) -> Vec<Entry> {
        self.entries
    }

    /// Keeps the rows at `indices`, in that order.
    pub(crate) fn select(&self, indices: &[usize]) -> Lexicon {
        Lexicon {
            format: self.format.clone(),
            entries: indices.iter().map(|&i| self.entries[i].clone()).collect(),
            language: self.language.clone(),
        }
    }
}

fn check_word(word: &str) -> Result<(), LexiconError> {
    if word.is_empty() || word.contains(['\t', '\n']) {
        return Err(LexiconError::InvalidWord { word: word.to_string() });
    }
    Ok(())
}

/// How words are compared when two lexicons are aligned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchPolicy {
    /// Compare Unicode-lowercased words instead of exact bytes.
    pub fold_case: bool,
    /// Reject two distinct words of one lexicon that map to the same key.
    /// When false the first occurrence wins.
    pub strict: bool,
}

impl MatchPolicy {
    pub fn exact() -> Self {
        Self { fold_case: false, strict: true }
    }

    pub fn fold_case() -> Self {
        Self { fold_case: true, strict: true }
    }

    pub fn key<'a>(&self, word: &'a str) -> Cow<'a, str> {
        if self.fold_case {
            Cow::Owned(word.to_lowercase())
        } else {
            Cow::Borrowed(word)
        }
    }
}

/// Affine map of every rating from the lexicon's scale onto `target`'s scale.
pub fn rescale(lex: &Lexicon, target: &FormatDescriptor) -> Result<Lexicon, LexiconError> {
    let source = lex.format();
    if !source.same_dimensions(target) {
        return Err(LexiconError::DimensionMismatch {
            expected: source.dimensions().join(","),
            found: target.dimensions().join(","),
        });
    }
    let entries = lex
        .entries
        .iter()
        .map(|e| Entry {
            word: e.word.clone(),
            ratings: e.ratings.iter().map(|&x| rescale_value(x, source, target)).collect(),
        })
        .collect();
    Ok(Lexicon { format: target.clone(), entries, language: lex.language.clone() })
}

/// `t_min + (x - s_min) * (t_max - t_min) / (s_max - s_min)`, clamped against rounding spill.
pub fn rescale_value(x: f64, source: &FormatDescriptor, target: &FormatDescriptor) -> f64 {
    let (s0, s1) = (source.scale_min(), source.scale_max());
    let (t0, t1) = (target.scale_min(), target.scale_max());
    if x == s0 {
        return t0;
    }
    if x == s1 {
        return t1;
    }
    target.clamp(t0 + (x - s0) * (t1 - t0) / (s1 - s0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn be5_on(min: f64, max: f64) -> FormatDescriptor {
        FormatDescriptor::be5().with_scale(min, max).unwrap()
    }

    fn single(format: FormatDescriptor, value: f64) -> Lexicon {
        let n = format.len();
        Lexicon::new(format, vec![Entry { word: "w".into(), ratings: vec![value; n] }]).unwrap()
    }

    #[test]
    fn rescale_fixed_points() {
        let five = FormatDescriptor::vad().with_scale(1.0, 5.0).unwrap();
        let nine = FormatDescriptor::vad();
        for (x, want) in [(1.0, 1.0), (5.0, 9.0), (3.0, 5.0), (2.0, 3.0)] {
            let out = rescale(&single(five.clone(), x), &nine).unwrap();
            assert_eq!(out.entries()[0].ratings, vec![want; 3], "x = {x}");
        }
    }

    #[test]
    fn rescale_rejects_other_dimensions() {
        let lex = single(FormatDescriptor::be5(), 2.0);
        assert!(matches!(rescale(&lex, &FormatDescriptor::vad()), Err(LexiconError::DimensionMismatch { .. })));
    }

    #[test]
    fn rescale_preserves_order_and_language() {
        let f = be5_on(0.0, 1.0);
        let entries = ["c", "a", "b"]
            .iter()
            .enumerate()
            .map(|(i, w)| Entry { word: w.to_string(), ratings: vec![i as f64 / 2.0; 5] })
            .collect();
        let lex = Lexicon::new(f, entries).unwrap().with_language("en");
        let out = rescale(&lex, &FormatDescriptor::be5()).unwrap();
        assert_eq!(out.words().collect::<Vec<_>>(), ["c", "a", "b"]);
        assert_eq!(out.language(), Some("en"));
        assert_eq!(out.entries()[1].ratings[0], 3.0);
    }

    #[test]
    fn constructor_validates() {
        let f = FormatDescriptor::va();
        let e = |w: &str, r: Vec<f64>| Entry { word: w.into(), ratings: r };
        assert!(matches!(Lexicon::new(f.clone(), vec![e("a", vec![1.0])]), Err(LexiconError::RatingCount { .. })));
        assert!(matches!(
            Lexicon::new(f.clone(), vec![e("a", vec![1.0, 9.5])]),
            Err(LexiconError::InvalidRating { .. })
        ));
        assert!(matches!(
            Lexicon::new(f.clone(), vec![e("a", vec![1.0, f64::NAN])]),
            Err(LexiconError::InvalidRating { .. })
        ));
        assert!(matches!(
            Lexicon::new(f.clone(), vec![e("a\tb", vec![1.0, 1.0])]),
            Err(LexiconError::InvalidWord { .. })
        ));
        assert!(matches!(
            Lexicon::new(f, vec![e("a", vec![1.0, 1.0]), e("a", vec![2.0, 2.0])]),
            Err(LexiconError::Duplicate { .. })
        ));
    }

    #[test]
    fn match_policy_keys() {
        assert_eq!(MatchPolicy::exact().key("Über"), "Über");
        assert_eq!(MatchPolicy::fold_case().key("Über"), "über");
    }
}
