use emomap_core::synth::{synthetic_gold, SyntheticSpec};
use emomap_core::{cross_corr, describe, top_k, MatchPolicy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn top_k_is_a_prefix_of_top_k_plus_one(seed in 0u64..1000, k in 1usize..40) {
        let g = synthetic_gold(&SyntheticSpec { words: 60, seed, ..Default::default() });
        for dim in ["valence", "arousal"] {
            let small = top_k(g.first(), dim, k).unwrap();
            let large = top_k(g.first(), dim, k + 1).unwrap();
            prop_assert_eq!(&large[..k], &small[..]);
            prop_assert!(small.windows(2).all(|w| w[0].1 >= w[1].1));
        }
    }
}

#[test]
fn correlation_matrix_is_symmetric_with_unit_diagonal() {
    let g = synthetic_gold(&SyntheticSpec::default());
    let m = cross_corr(g.first(), g.second(), MatchPolicy::exact()).unwrap();
    assert_eq!(m.dimensions.len(), 8);
    assert_eq!(m.overlap, 1000);
    for (i, row) in m.cells.iter().enumerate() {
        assert_eq!(row[i], Some(1.0));
        for (j, c) in row.iter().enumerate() {
            assert_eq!(*c, m.cells[j][i]);
        }
    }
    assert!(m.get("valence", "joy").unwrap() > 0.5);
}

#[test]
fn summary_is_bounded() {
    let g = synthetic_gold(&SyntheticSpec::default());
    for s in describe(g.second()).unwrap() {
        assert_eq!(s.n, 1000);
        assert!(s.min <= s.median && s.median <= s.max);
        assert!(s.min <= s.mean && s.mean <= s.max);
        assert!((1.0..=5.0).contains(&s.min) && (1.0..=5.0).contains(&s.max));
        assert!(s.sd.unwrap() > 0.0);
    }
}
