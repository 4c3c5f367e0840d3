//! Decompose synthetic skin conductance into tonic and phasic parts, detect
//! the skin-conductance responses and compute the F5 features.
//!
//!     cargo run --example eda_features

use anxbench::eda::{decompose, detect_scr, eda_features, wavelet_bands, F5_NAMES};
use anxbench::signal::{synthesize_eda, EdaSynthParams};

fn main() -> anxbench::Result<()> {
    let fs = 32.0;
    let (rec, truth) = synthesize_eda(&EdaSynthParams {
        scr_onsets: vec![5.0, 18.0, 31.0, 44.0],
        amplitudes: vec![0.3, 0.15, 0.5, 0.2],
        tonic_level: 4.0,
        duration: 60.0,
        sampling_rate: fs,
        seed: 1,
    })?;
    let d = decompose(&rec.samples, fs);
    let events = detect_scr(&d);
    println!("generated {} responses, detected {}", truth.scr_events().len(), events.len());
    for e in &events {
        println!(
            "  onset {:6.2} s  amplitude {:.3} µS  rise {:.2} s  recovery {}",
            e.onset_index as f64 / fs,
            e.amplitude,
            e.rise_time,
            e.recovery_time.map_or("-".into(), |r| format!("{r:.2} s"))
        );
    }
    let bands = wavelet_bands(&rec.samples, fs);
    let f5 = eda_features(&d, &events, bands[0].as_deref());
    for (n, v) in F5_NAMES.iter().zip(f5) {
        println!("{n:<24} {}", v.map_or("missing".into(), |v| format!("{v:.5}")));
    }
    Ok(())
}
