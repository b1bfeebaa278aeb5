//! Synthetic dual-annotated gold sets with a known VAD-to-BE5 relation.
//!
//! VAD ratings are drawn uniformly on `[1, 9]`. Each basic emotion is a fixed,
//! smooth function of VAD that is monotone in every dimension, optionally
//! perturbed by Gaussian noise and clamped to `[1, 5]`. The five functions
//! jointly determine all three VAD dimensions, so the relation can be learned
//! in both directions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::format::FormatDescriptor;
use crate::lexicon::{Entry, Lexicon, MergedLexicon};

/// Noise-free BE5 ratings for one VAD vector.
pub fn be5_from_vad(vad: [f64; 3]) -> [f64; 5] {
    let [v, a, d] = vad.map(|x| (x - 1.0) / 8.0);
    let scale = |t: f64| 1.0 + 4.0 * t.clamp(0.0, 1.0);
    [
        scale((0.7 * v + 0.1 * a + 0.2 * d).powf(1.5)),
        scale(0.45 * (1.0 - v) + 0.35 * a + 0.2 * d),
        scale((0.6 * (1.0 - v) + 0.25 * (1.0 - a) + 0.15 * (1.0 - d)).powf(1.2)),
        scale(0.4 * (1.0 - v) + 0.35 * a + 0.25 * (1.0 - d)),
        scale((0.5 * (1.0 - v) + 0.2 * a + 0.3 * (1.0 - d)).powf(1.3)),
    ]
}

/// Exactly affine BE5 ratings for one VAD vector (used where linearity matters).
pub fn be5_affine_from_vad(vad: [f64; 3]) -> [f64; 5] {
    let [v, a, d] = vad.map(|x| (x - 1.0) / 8.0);
    let scale = |t: f64| 1.0 + 4.0 * t;
    [
        scale(0.7 * v + 0.1 * a + 0.2 * d),
        scale(0.45 * (1.0 - v) + 0.35 * a + 0.2 * d),
        scale(0.6 * (1.0 - v) + 0.25 * (1.0 - a) + 0.15 * (1.0 - d)),
        scale(0.4 * (1.0 - v) + 0.35 * a + 0.25 * (1.0 - d)),
        scale(0.5 * (1.0 - v) + 0.2 * a + 0.3 * (1.0 - d)),
    ]
}

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub words: usize,
    pub seed: u64,
    pub noise_sd: f64,
    pub affine: bool,
    pub prefix: String,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self { words: 1000, seed: 42, noise_sd: 0.1, affine: false, prefix: "syn".into() }
    }
}

/// A VAD (first) / BE5 (second) gold set drawn from the generator.
pub fn synthetic_gold(spec: &SyntheticSpec) -> MergedLexicon {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sd.max(0.0)).expect("finite noise sd");
    let be5_format = FormatDescriptor::be5();
    let width = spec.words.max(1).to_string().len();
    let (mut vad, mut be5) = (Vec::with_capacity(spec.words), Vec::with_capacity(spec.words));
    for i in 0..spec.words {
        let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(1.0..=9.0));
        let clean = if spec.affine { be5_affine_from_vad(x) } else { be5_from_vad(x) };
        let y: Vec<f64> = clean
            .iter()
            .map(|&c| if spec.noise_sd > 0.0 { be5_format.clamp(c + noise.sample(&mut rng)) } else { c })
            .collect();
        let word = format!("{}{:0width$}", spec.prefix, i);
        vad.push(Entry { word: word.clone(), ratings: x.to_vec() });
        be5.push(Entry { word, ratings: y });
    }
    MergedLexicon::new(
        Lexicon::new(FormatDescriptor::vad(), vad).expect("generated VAD in range"),
        Lexicon::new(be5_format, be5).expect("generated BE5 in range"),
    )
    .expect("matching rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let spec = SyntheticSpec { words: 50, ..Default::default() };
        let a = synthetic_gold(&spec);
        assert_eq!(a, synthetic_gold(&spec));
        assert_eq!(a.len(), 50);
        assert_eq!(a.words().next(), Some("syn00"));
        let other = synthetic_gold(&SyntheticSpec { seed: 7, ..spec });
        assert_ne!(a.first().entries()[0].ratings, other.first().entries()[0].ratings);
    }

    #[test]
    fn functions_are_monotone_per_dimension() {
        // joy rises with every VAD dimension; sadness falls with every one.
        let base = [5.0, 5.0, 5.0];
        for dim in 0..3 {
            let mut hi = base;
            hi[dim] = 7.0;
            assert!(be5_from_vad(hi)[0] > be5_from_vad(base)[0]);
            assert!(be5_from_vad(hi)[2] < be5_from_vad(base)[2]);
        }
        assert_eq!(be5_affine_from_vad([1.0, 1.0, 1.0])[0], 1.0);
        assert_eq!(be5_affine_from_vad([9.0, 9.0, 9.0])[0], 5.0);
    }
}
