//! ECG: R-peak detection and the heart-rate-variability feature sets.
//!
//! | set | contents |
//! |-----|----------|
//! | F1  | time domain |
//! | F2  | frequency domain |
//! | F3  | Poincaré, asymmetry, fragmentation, MFDFA, entropy, fractal |
//! | F4  | recurrence quantification |

pub mod entropy;
pub mod fractal;
pub mod freq;
pub mod mfdfa;
pub mod peaks;
pub mod poincare;
pub mod rqa;
pub mod rr;
pub mod time;

pub use entropy::{entropy_suite, Entropies};
pub use fractal::{fractal_suite, Fractal};
pub use freq::{frequency_domain, FrequencyDomain};
pub use mfdfa::{mfdfa_alpha1, Mfdfa};
pub use peaks::{detect_peaks, detect_r_peaks, match_peaks};
pub use poincare::{asymmetry, fragmentation, poincare, Asymmetry, Fragmentation, Poincare};
pub use rqa::{rqa, Rqa};
pub use rr::RRSeries;
pub use time::{time_domain, TimeDomain};

use crate::preprocess::Window;

pub const F1_NAMES: [&str; 5] = ["MeanNN", "SDNN", "MadNN", "MinNN", "TINN"];
pub const F2_NAMES: [&str; 4] = ["LF", "HF", "VHF", "LF_HF"];
pub const F3_NAMES: [&str; 21] = [
    "SD1",
    "CSI_Modified",
    "PIP",
    "PAS",
    "GI",
    "PI",
    "C1d",
    "C2d",
    "MFDFA_alpha1_Width",
    "MFDFA_alpha1_Peak",
    "MFDFA_alpha1_Mean",
    "MFDFA_alpha1_Max",
    "MFDFA_alpha1_Fluctuation",
    "ApEn",
    "SampEn",
    "ShanEn",
    "MSEn",
    "CMSEn",
    "HFD",
    "KFD",
    "LZC",
];
pub const F4_NAMES: [&str; 6] = ["RecurrenceRate", "DiagRec", "Determinism", "L", "W", "WMax"];

/// All HRV values of one window; `None` is a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct HrvFeatures {
    pub f1: [Option<f64>; 5],
    pub f2: [Option<f64>; 4],
    pub f3: [Option<f64>; 21],
    pub f4: [Option<f64>; 6],
}

impl HrvFeatures {
    pub fn missing() -> Self {
        Self {
            f1: [None; 5],
            f2: [None; 4],
            f3: [None; 21],
            f4: [None; 6],
        }
    }

    /// Values of F1..F4 in name order.
    pub fn iter(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.f1.iter().chain(&self.f2).chain(&self.f3).chain(&self.f4).copied()
    }
}

/// Features of an NN series. Non-finite results are reported as missing.
pub fn hrv_features(rr: Option<&RRSeries>) -> HrvFeatures {
    let Some(rr) = rr.filter(|r| !r.is_empty()) else {
        return HrvFeatures::missing();
    };
    let p = poincare(rr);
    let a = asymmetry(rr);
    let fr = fragmentation(rr);
    let m = mfdfa_alpha1(rr);
    let e = entropy_suite(rr);
    let fd = fractal_suite(rr);
    let [w, pk, mn, mx, fl] = Mfdfa::values(m.as_ref());
    let clean = |v: Option<f64>| v.filter(|x| x.is_finite());
    HrvFeatures {
        f1: time_domain(rr).values().map(clean),
        f2: frequency_domain(rr).values().map(clean),
        f3: [
            p.sd1,
            p.csi_modified,
            fr.pip,
            fr.pas,
            a.gi,
            a.pi,
            a.c1d,
            a.c2d,
            w,
            pk,
            mn,
            mx,
            fl,
            e.apen,
            e.sampen,
            e.shanen,
            e.msen,
            e.cmsen,
            fd.hfd,
            fd.kfd,
            fd.lzc,
        ]
        .map(clean),
        f4: Rqa::values(rqa(rr).as_ref()).map(clean),
    }
}

/// Detects peaks in a band-passed ECG window and computes its features.
pub fn window_features(window: &Window<'_>) -> HrvFeatures {
    hrv_features(detect_r_peaks(window).as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unusable_window_is_all_missing() {
        assert!(hrv_features(None).iter().all(|v| v.is_none()));
        assert_eq!(hrv_features(None).iter().count(), 36);
    }

    #[test]
    fn scale_equivariance() {
        let nn: Vec<f64> = (0..80).map(|i| 800.0 + 40.0 * ((i * 7 % 13) as f64 - 6.0)).collect();
        let c = 1.7;
        let a = hrv_features(Some(&RRSeries::from_nn(nn.clone())));
        let b = hrv_features(Some(&RRSeries::from_nn(nn.iter().map(|v| v * c).collect())));
        for i in 0..4 {
            assert!((b.f1[i].unwrap() - c * a.f1[i].unwrap()).abs() < 1e-9 * b.f1[i].unwrap().abs().max(1.0));
        }
        assert!((b.f3[0].unwrap() - c * a.f3[0].unwrap()).abs() < 1e-9);
        for i in [2, 3, 4, 5] {
            assert!((b.f3[i].unwrap() - a.f3[i].unwrap()).abs() < 1e-9, "F3[{i}]");
        }
        for i in [0, 2] {
            assert!((b.f4[i].unwrap() - a.f4[i].unwrap()).abs() < 1e-12, "F4[{i}]");
        }
    }
}
