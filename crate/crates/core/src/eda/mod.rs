//! EDA: tonic/phasic decomposition, skin-conductance responses, Haar
//! wavelet bands and the F5 feature vector.

mod decompose;
mod scr;
mod wavelet;

pub use decompose::{decompose, moving_median, trough_envelope, EdaDecomposition, TONIC_SMOOTHING_HZ, TONIC_WINDOW_S};
pub use scr::{detect_scr, ScrEvent, MIN_AMPLITUDE_US};
pub use wavelet::{haar_details, level_for, wavelet_bands, TARGET_HZ};

use crate::numeric::{linear_fit, max, mean, median, min, sample_sd};
use crate::preprocess::Window;

pub const F5_NAMES: [&str; 16] = [
    "SCR_Duration_Mean",
    "SCR_Amplitude_Mean",
    "SCR_RiseTime_Mean",
    "SCR_FirstDerivative_Mean",
    "SCR_SecondDerivative_Mean",
    "SCR_Wavelet4Hz_Mean",
    "SCR_Duration_Max",
    "SCR_Amplitude_Max",
    "SCR_RiseTime_Max",
    "SCR_RecoveryTime_Max",
    "SCR_Duration_Min",
    "SCR_Amplitude_Min",
    "SCR_Median",
    "SCR_Wavelet4Hz_Median",
    "SCR_Wavelet4Hz_SD",
    "SCR_Slope",
];

/// F5 values in `F5_NAMES` order. Event statistics are missing when there
/// are no events; derivatives are per second over the whole phasic trace.
pub fn eda_features(decomp: &EdaDecomposition, events: &[ScrEvent], band_4hz: Option<&[f64]>) -> [Option<f64>; 16] {
    let fs = decomp.sampling_rate;
    let p = &decomp.phasic;
    let durations: Vec<f64> = events.iter().map(|e| e.duration).collect();
    let amplitudes: Vec<f64> = events.iter().map(|e| e.amplitude).collect();
    let rises: Vec<f64> = events.iter().map(|e| e.rise_time).collect();
    let recoveries: Vec<f64> = events.iter().filter_map(|e| e.recovery_time).collect();
    let d1: Vec<f64> = p.windows(2).map(|w| (w[1] - w[0]) * fs).collect();
    let d2: Vec<f64> = d1.windows(2).map(|w| (w[1] - w[0]) * fs).collect();
    let t: Vec<f64> = (0..p.len()).map(|i| i as f64 / fs).collect();
    let w = band_4hz.unwrap_or(&[]);
    let out = [
        mean(&durations),
        mean(&amplitudes),
        mean(&rises),
        mean(&d1),
        mean(&d2),
        mean(w),
        max(&durations),
        max(&amplitudes),
        max(&rises),
        max(&recoveries),
        min(&durations),
        min(&amplitudes),
        median(p),
        median(w),
        sample_sd(w),
        linear_fit(&t, p).map(|(slope, _)| slope),
    ];
    out.map(|v| v.filter(|x| x.is_finite()))
}

/// Full F5 pass over one low-passed EDA window.
pub fn window_features(window: &Window<'_>) -> [Option<f64>; 16] {
    let decomp = decompose(window.samples, window.sampling_rate);
    let events = detect_scr(&decomp);
    let [b4, _, _] = wavelet_bands(window.samples, window.sampling_rate);
    eda_features(&decomp, &events, b4.as_deref())
}
