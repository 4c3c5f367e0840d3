//! Compute the F1–F4 heart-rate-variability features of one NN series.
//!
//!     cargo run --example hrv_features

use anxbench::ecg::{hrv_features, RRSeries, F1_NAMES, F2_NAMES, F3_NAMES, F4_NAMES};
use rand::Rng;

fn main() {
    let mut rng = anxbench::seed::rng(3);
    // 90 beats around 800 ms with a slow respiratory swing and jitter.
    let nn: Vec<f64> = (0..90)
        .map(|i| 800.0 + 40.0 * (i as f64 * 0.9).sin() + rng.random_range(-20.0..20.0))
        .collect();
    let f = hrv_features(Some(&RRSeries::from_nn(nn)));
    let groups: [(&str, &[&str], Vec<Option<f64>>); 4] = [
        ("F1 time domain", &F1_NAMES, f.f1.to_vec()),
        ("F2 frequency domain", &F2_NAMES, f.f2.to_vec()),
        ("F3 nonlinear", &F3_NAMES, f.f3.to_vec()),
        ("F4 recurrence", &F4_NAMES, f.f4.to_vec()),
    ];
    for (title, names, values) in groups {
        println!("{title}");
        for (n, v) in names.iter().zip(values) {
            match v {
                Some(v) => println!("  {n:<26} {v:>12.5}"),
                None => println!("  {n:<26} {:>12}", "missing"),
            }
        }
    }
}
