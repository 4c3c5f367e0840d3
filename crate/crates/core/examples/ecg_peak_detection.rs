//! Detect R-peaks in synthetic ECG at three sampling rates and score the
//! detections against the generator's ground truth.
//!
//!     cargo run --example ecg_peak_detection

use anxbench::ecg::{detect_peaks, match_peaks};
use anxbench::preprocess::bandpass_filter;
use anxbench::signal::{synthesize_ecg, EcgSynthParams};

fn main() -> anxbench::Result<()> {
    println!("{:>6} {:>6} {:>8} {:>8} {:>9} {:>9}", "fs", "noise", "truth", "found", "sens", "prec");
    for fs in [1024.0, 700.0, 250.0] {
        for noise in [0.0, 0.05] {
            let (rec, truth) = synthesize_ecg(&EcgSynthParams::new(72.0, 40.0, 120.0, fs, noise, 7))?;
            let clean = bandpass_filter(&rec.samples, fs, 1.0, 49.0_f64.min(0.45 * fs))?;
            let found = detect_peaks(&clean, fs);
            let tol = (0.05 * fs).round() as usize;
            let (tp, fp, fn_) = match_peaks(&found, truth.peak_indices(), tol);
            println!(
                "{fs:>6} {noise:>6} {:>8} {:>8} {:>8.2}% {:>8.2}%",
                truth.peak_indices().len(),
                found.len(),
                100.0 * tp as f64 / (tp + fn_) as f64,
                100.0 * tp as f64 / (tp + fp).max(1) as f64
            );
        }
    }
    Ok(())
}
