//! Shared fixtures for the benchmarks in `benches/`.

use emomap_core::synth::{synthetic_gold, SyntheticSpec};
use emomap_core::MergedLexicon;

/// Synthetic VAD/BE5 gold lexicon of `words` rows.
pub fn gold(words: usize, seed: u64) -> MergedLexicon {
    synthetic_gold(&SyntheticSpec { words, seed, ..Default::default() })
}

/// Deterministic pseudo-random series for correlation benchmarks.
pub fn series(len: usize) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..len).map(|i| ((i * 7919) % 1000) as f64 / 100.0).collect();
    let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + ((i * 104729) % 97) as f64 / 50.0).collect();
    (x, y)
}
