//! Conversion of emotion lexicons between dimensional (Valence-Arousal-Dominance)
//! and categorical (five basic emotions) formats.
//!
//! A [`KnnModel`] is trained on a gold set of words rated in both formats
//! ([`MergedLexicon`]) and then maps a lexicon from one format into the other,
//! one independent k-nearest-neighbor regressor per target dimension.
//!
//! The [`eval`] module runs the monolingual cross-validation, pairwise
//! crosslingual and bagged crosslingual protocols; [`stats`] holds the
//! correlation and significance machinery; [`builder`] constructs new
//! lexicons and the descriptive reports over them.
//!
//! ```
//! use emomap_core::{intersect, FormatDescriptor, KnnModel, Direction, MatchPolicy};
//! use emomap_core::lexicon::{parse_lexicon, ParseOptions};
//!
//! let vad = "word\tvalence\tarousal\tdominance\nsunshine\t8.1\t5.3\t5.4\nterrorism\t1.6\t7.4\t2.7\n";
//! let be5 = "word\tjoy\tanger\tsadness\tfear\tdisgust\nsunshine\t4.2\t1.2\t1.3\t1.3\t1.2\nterrorism\t1.1\t3.1\t3.4\t3.7\t2.7\n";
//! let opts = ParseOptions::strict();
//! let vad = parse_lexicon(vad.as_bytes(), &FormatDescriptor::vad(), &opts).unwrap();
//! let be5 = parse_lexicon(be5.as_bytes(), &FormatDescriptor::be5(), &opts).unwrap();
//!
//! let gold = intersect(&vad, &be5, MatchPolicy::exact()).unwrap();
//! let model = KnnModel::fit(&gold, Direction::FirstToSecond, 1).unwrap();
//! assert_eq!(model.predict(&[8.0, 5.0, 5.0]).unwrap(), vec![4.2, 1.2, 1.3, 1.3, 1.2]);
//! ```

pub mod builder;
pub mod eval;
pub mod format;
pub mod knn;
pub mod lexicon;
pub mod stats;
pub mod synth;

pub use builder::{build, cross_corr, describe, top_k, BuildError, BuildManifest, CorrelationMatrix, Summary};
pub use eval::{
    eval_cross_bagged, eval_cross_pair, eval_mono, BaggedOutcome, DirectionChoice, EvalConfig, EvalError, EvalReport,
};
pub use format::{FormatDescriptor, FormatError};
pub use knn::{KnnError, KnnModel};
pub use lexicon::{intersect, rescale, Direction, Entry, Lexicon, LexiconError, MatchPolicy, MergedLexicon};
pub use stats::{
    isr, isr_floor, pearson, t_test_one_sample_one_tailed, z_test_correlations_one_tailed, CorrelationResult, IsrFloor,
    IsrResult, StatsError, TestOutcome,
};
