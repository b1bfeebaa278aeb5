//! Published reference values used as comparison points.
//!
//! These are reported figures entered by hand, not values computed by this
//! crate: the inter-study reliabilities of eight pairs of VAD rating studies,
//! and a word-level emotion prediction baseline evaluated with 10-fold CV on
//! the English ANEW norms.

use super::{isr_floor, CorrelationResult, Floor, IsrFloor, IsrResult};

/// One study pair: label, Valence, Arousal, Dominance (if rated by both), overlap.
pub struct ReportedIsr {
    pub label: &'static str,
    pub valence: f64,
    pub arousal: f64,
    pub dominance: Option<f64>,
    pub overlap: usize,
}

pub const REPORTED_ISR: [ReportedIsr; 8] = [
    ReportedIsr { label: "Imbir16 vs. Riegel15", valence: 0.948, arousal: 0.733, dominance: None, overlap: 1272 },
    ReportedIsr { label: "Guasch15 vs. Stadthagen16", valence: 0.949, arousal: 0.875, dominance: None, overlap: 1298 },
    ReportedIsr {
        label: "Bradley99 vs. Warriner13",
        valence: 0.952,
        arousal: 0.760,
        dominance: Some(0.794),
        overlap: 1027,
    },
    ReportedIsr { label: "Guasch15 vs. Hinojosa16", valence: 0.968, arousal: 0.777, dominance: None, overlap: 134 },
    ReportedIsr { label: "Guasch15 vs. Redondo07", valence: 0.969, arousal: 0.844, dominance: None, overlap: 316 },
    ReportedIsr { label: "Hinojosa16 vs. Stadthagen16", valence: 0.970, arousal: 0.709, dominance: None, overlap: 636 },
    ReportedIsr { label: "Schmidtke14 vs. Kanske10", valence: 0.971, arousal: 0.788, dominance: None, overlap: 169 },
    ReportedIsr { label: "Redondo07 vs. Stadthagen16", valence: 0.976, arousal: 0.755, dominance: None, overlap: 1010 },
];

/// Reported ISR floors (per-dimension minima of [`REPORTED_ISR`]).
pub const ISR_FLOOR_VALENCE: f64 = 0.948;
pub const ISR_FLOOR_AROUSAL: f64 = 0.709;
pub const ISR_FLOOR_DOMINANCE: f64 = 0.794;

/// Word-level emotion prediction baseline (Sedoc et al. 2017), English, 10-fold CV.
pub const BASELINE_VALENCE: f64 = 0.806;
pub const BASELINE_AROUSAL: f64 = 0.615;

impl ReportedIsr {
    pub fn as_isr_result(&self) -> IsrResult {
        let c = |r: f64| CorrelationResult { r, n: self.overlap };
        let mut dimensions = vec![("valence".to_string(), c(self.valence)), ("arousal".to_string(), c(self.arousal))];
        if let Some(d) = self.dominance {
            dimensions.push(("dominance".to_string(), c(d)));
        }
        IsrResult { label: self.label.to_string(), overlap: self.overlap, dimensions }
    }
}

pub fn reported_isr_results() -> Vec<IsrResult> {
    REPORTED_ISR.iter().map(ReportedIsr::as_isr_result).collect()
}

/// Floors derived from the reported pairs, as fixed comparison values.
///
/// Reported reliabilities carry no usable sampling distribution here, so they
/// are compared against as constants (`n = None`).
pub fn reported_floors() -> IsrFloor {
    isr_floor(&reported_isr_results(), &["valence", "arousal", "dominance"])
        .expect("reported table covers all VAD dimensions")
        .as_fixed()
}

pub fn baseline() -> Vec<Floor> {
    let f = |d: &str, r| Floor { dimension: d.into(), r, n: None, source: "Sedoc17 word-level prediction".into() };
    vec![f("valence", BASELINE_VALENCE), f("arousal", BASELINE_AROUSAL)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floors_match_published_minima() {
        let f = reported_floors();
        assert_eq!(f.r("valence"), Some(ISR_FLOOR_VALENCE));
        assert_eq!(f.r("arousal"), Some(ISR_FLOOR_AROUSAL));
        assert_eq!(f.r("dominance"), Some(ISR_FLOOR_DOMINANCE));
        assert!(f.floors.iter().all(|fl| fl.n.is_none()));
    }
}
