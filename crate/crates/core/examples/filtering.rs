//! Magnitude response of the ECG band-pass and EDA low-pass filters and the
//! zero-phase property of forward-backward filtering.
//!
//!     cargo run --example filtering

use anxbench::preprocess::{Sos, ECG_BANDPASS_ORDER, EDA_LOWPASS_ORDER};

fn db(sos: &Sos, f: f64, fs: f64) -> f64 {
    // filtfilt squares the single-pass magnitude.
    40.0 * sos.response(f, fs).norm().log10()
}

fn main() -> anxbench::Result<()> {
    let fs = 256.0;
    let ecg = Sos::butter_bandpass(ECG_BANDPASS_ORDER, 1.0, 49.0, fs)?;
    println!("ECG band-pass 1-49 Hz at {fs} Hz");
    for f in [0.2, 0.5, 1.0, 10.0, 49.0, 60.0, 100.0] {
        println!("  {f:>6.1} Hz {:>9.2} dB", db(&ecg, f, fs));
    }
    let eda = Sos::butter_lowpass(EDA_LOWPASS_ORDER, 5.0, 64.0)?;
    println!("EDA low-pass 5 Hz at 64 Hz");
    for f in [1.0, 5.0, 10.0, 20.0] {
        println!("  {f:>6.1} Hz {:>9.2} dB", db(&eda, f, 64.0));
    }

    let x: Vec<f64> = (0..2048).map(|i| (2.0 * std::f64::consts::PI * 10.0 * i as f64 / fs).sin()).collect();
    let y = ecg.filtfilt(&x);
    let lag = (-20i32..=20)
        .max_by(|&a, &b| {
            let c = |l: i32| -> f64 {
                (512..1536).map(|i| x[i] * y[(i as i32 + l) as usize]).sum()
            };
            c(a).total_cmp(&c(b))
        })
        .unwrap_or(0);
    println!("cross-correlation peak lag of a 10 Hz sine: {lag} samples");
    Ok(())
}
