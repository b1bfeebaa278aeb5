//! Dual-annotated lexicons built by intersecting complementary resources.

use std::collections::hash_map::Entry as MapEntry;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::format::FormatDescriptor;

use super::{Lexicon, LexiconError, MatchPolicy};

/// Words rated in two formats at once. Row `i` of both slices describes `words()[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedLexicon {
    first: Lexicon,
    second: Lexicon,
}

/// Which slice of a [`MergedLexicon`] serves as the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    FirstToSecond,
    SecondToFirst,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::FirstToSecond => Direction::SecondToFirst,
            Direction::SecondToFirst => Direction::FirstToSecond,
        }
    }
}

impl MergedLexicon {
    pub fn new(first: Lexicon, second: Lexicon) -> Result<Self, LexiconError> {
        if let Some(d) = first.format().shares_dimension_with(second.format()) {
            return Err(LexiconError::DimensionCollision { dimension: d.to_string() });
        }
        if first.len() != second.len() {
            return Err(LexiconError::MergedShape(format!("{} vs {} rows", first.len(), second.len())));
        }
        if let Some((a, b)) = first.words().zip(second.words()).find(|(a, b)| a != b) {
            return Err(LexiconError::MergedShape(format!("row word `{a}` vs `{b}`")));
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> &Lexicon {
        &self.first
    }

    pub fn second(&self) -> &Lexicon {
        &self.second
    }

    pub fn formats(&self) -> (&FormatDescriptor, &FormatDescriptor) {
        (self.first.format(), self.second.format())
    }

    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.first.words()
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    /// `(source, target)` slices for a direction.
    pub fn slices(&self, direction: Direction) -> (&Lexicon, &Lexicon) {
        match direction {
            Direction::FirstToSecond => (&self.first, &self.second),
            Direction::SecondToFirst => (&self.second, &self.first),
        }
    }

    /// Resolves a direction from format names, e.g. `("vad", "be5")`.
    pub fn direction(&self, source: &str, target: &str) -> Option<Direction> {
        let (a, b) = (self.first.format().name(), self.second.format().name());
        let eq = |x: &str, y: &str| x.eq_ignore_ascii_case(y);
        if eq(source, a) && eq(target, b) {
            Some(Direction::FirstToSecond)
        } else if eq(source, b) && eq(target, a) {
            Some(Direction::SecondToFirst)
        } else {
            None
        }
    }

    /// Keeps the rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> MergedLexicon {
        MergedLexicon { first: self.first.select(indices), second: self.second.select(indices) }
    }

    /// Whether both slices use the same formats as `other`, in the same roles.
    pub fn same_formats(&self, other: &MergedLexicon) -> bool {
        self.first.format() == other.first.format() && self.second.format() == other.second.format()
    }
}

fn key_index(lex: &Lexicon, policy: MatchPolicy) -> Result<HashMap<String, usize>, LexiconError> {
    let mut index: HashMap<String, usize> = HashMap::with_capacity(lex.len());
    for (i, word) in lex.words().enumerate() {
        match index.entry(policy.key(word).into_owned()) {
            MapEntry::Vacant(v) => {
                v.insert(i);
            }
            MapEntry::Occupied(o) if policy.strict => {
                return Err(LexiconError::KeyCollision {
                    first: lex.entries()[*o.get()].word.clone(),
                    second: word.to_string(),
                    key: o.key().clone(),
                });
            }
            MapEntry::Occupied(_) => {}
        }
    }
    Ok(index)
}

/// Index pairs `(row in a, row in b)` of words present in both lexicons,
/// ordered by first occurrence in `a`.
pub fn align(a: &Lexicon, b: &Lexicon, policy: MatchPolicy) -> Result<Vec<(usize, usize)>, LexiconError> {
    let a_index = key_index(a, policy)?;
    let b_index = key_index(b, policy)?;
    let mut pairs: Vec<(usize, usize)> =
        a_index.iter().filter_map(|(key, &ia)| b_index.get(key).map(|&ib| (ia, ib))).collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// Merges two complementary lexicons into the words they share. Output words
/// are spelled as in `a`.
pub fn intersect(a: &Lexicon, b: &Lexicon, policy: MatchPolicy) -> Result<MergedLexicon, LexiconError> {
    if let Some(d) = a.format().shares_dimension_with(b.format()) {
        return Err(LexiconError::DimensionCollision { dimension: d.to_string() });
    }
    let pairs = align(a, b, policy)?;
    let first = a.select(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let mut second = b.select(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    for (e, w) in second.entries.iter_mut().zip(first.words()) {
        if e.word != w {
            e.word = w.to_string();
        }
    }
    MergedLexicon::new(first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Entry;

    fn lex(format: FormatDescriptor, words: &[&str]) -> Lexicon {
        let n = format.len();
        let entries = words
            .iter()
            .enumerate()
            .map(|(i, w)| Entry { word: w.to_string(), ratings: vec![1.0 + i as f64 * 0.5; n] })
            .collect();
        Lexicon::new(format, entries).unwrap()
    }

    #[test]
    fn intersects_shared_words() {
        let a = lex(FormatDescriptor::vad(), &["sunshine", "terrorism"]);
        let b = lex(FormatDescriptor::be5(), &["terrorism", "orgasm"]);
        let m = intersect(&a, &b, MatchPolicy::exact()).unwrap();
        assert_eq!(m.words().collect::<Vec<_>>(), ["terrorism"]);
        assert_eq!(m.first().entries()[0].ratings, vec![1.5; 3]);
        assert_eq!(m.second().entries()[0].ratings, vec![1.0; 5]);
    }

    #[test]
    fn disjoint_vocabularies_give_empty_merge() {
        let a = lex(FormatDescriptor::vad(), &["a", "b"]);
        let b = lex(FormatDescriptor::be5(), &["c"]);
        assert!(intersect(&a, &b, MatchPolicy::exact()).unwrap().is_empty());
    }

    #[test]
    fn output_follows_first_lexicon_order() {
        let a = lex(FormatDescriptor::vad(), &["c", "a", "b"]);
        let b = lex(FormatDescriptor::be5(), &["a", "b", "c"]);
        let m = intersect(&a, &b, MatchPolicy::exact()).unwrap();
        assert_eq!(m.words().collect::<Vec<_>>(), ["c", "a", "b"]);
    }

    #[test]
    fn collisions() {
        let a = lex(FormatDescriptor::vad(), &["x"]);
        assert!(matches!(intersect(&a, &a, MatchPolicy::exact()), Err(LexiconError::DimensionCollision { .. })));

        let a = lex(FormatDescriptor::vad(), &["Apple", "apple"]);
        let b = lex(FormatDescriptor::be5(), &["APPLE"]);
        assert_eq!(intersect(&a, &b, MatchPolicy::exact()).unwrap().len(), 0);
        assert!(matches!(intersect(&a, &b, MatchPolicy::fold_case()), Err(LexiconError::KeyCollision { .. })));
        let lenient = MatchPolicy { fold_case: true, strict: false };
        let m = intersect(&a, &b, lenient).unwrap();
        assert_eq!(m.words().collect::<Vec<_>>(), ["Apple"]);
        assert_eq!(m.second().words().collect::<Vec<_>>(), ["Apple"]);
    }

    #[test]
    fn directions() {
        let a = lex(FormatDescriptor::vad(), &["x"]);
        let b = lex(FormatDescriptor::be5(), &["x"]);
        let m = MergedLexicon::new(a, b).unwrap();
        assert_eq!(m.direction("vad", "be5"), Some(Direction::FirstToSecond));
        assert_eq!(m.direction("BE5", "VAD"), Some(Direction::SecondToFirst));
        assert_eq!(m.direction("vad", "va"), None);
        let (src, tgt) = m.slices(Direction::SecondToFirst);
        assert_eq!((src.format().name(), tgt.format().name()), ("be5", "vad"));
    }
}
