use std::f64::consts::SQRT_2;

pub const TARGET_HZ: [f64; 3] = [4.0, 2.0, 1.0];

/// Detail coefficients of every Haar level, level 1 first. An odd trailing
/// sample is dropped at each level.
pub fn haar_details(x: &[f64]) -> Vec<Vec<f64>> {
    let mut approx = x.to_vec();
    let mut levels = Vec::new();
    while approx.len() >= 2 {
        let (a, d): (Vec<f64>, Vec<f64>) = approx
            .chunks_exact(2)
            .map(|p| ((p[0] + p[1]) / SQRT_2, (p[0] - p[1]) / SQRT_2))
            .unzip();
        levels.push(d);
        approx = a;
    }
    levels
}

/// Level `k ≥ 1` whose band `(fs/2^(k+1), fs/2^k]` contains `f`.
pub fn level_for(f: f64, fs: f64) -> Option<usize> {
    (1..64).find(|&k| {
        let hi = fs / 2f64.powi(k as i32);
        f <= hi && f > hi / 2.0
    })
}

/// Detail coefficients hosting 4, 2 and 1 Hz; `None` where the band does
/// not exist at this rate or the signal is too short to reach it.
pub fn wavelet_bands(signal: &[f64], sampling_rate: f64) -> [Option<Vec<f64>>; 3] {
    let levels = haar_details(signal);
    TARGET_HZ.map(|f| level_for(f, sampling_rate).and_then(|k| levels.get(k - 1).cloned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_zero_details() {
        for level in haar_details(&[3.0; 64]) {
            assert!(level.iter().all(|d| *d == 0.0));
        }
    }

    #[test]
    fn step_gives_one_coefficient_per_level() {
        let x: Vec<f64> = (0..64).map(|i| if i >= 33 { 1.0 } else { 0.0 }).collect();
        let levels = haar_details(&x);
        // level-k detail of a unit step falling inside block j:
        // (ones in first half − ones in second half) / 2^(k/2)
        for (k, d) in levels.iter().enumerate() {
            let size = 1usize << (k + 1);
            let expected: Vec<f64> = (0..64 / size)
                .map(|j| {
                    let ones = |lo: usize, hi: usize| (lo..hi).filter(|i| *i >= 33).count() as f64;
                    let s = j * size;
                    (ones(s, s + size / 2) - ones(s + size / 2, s + size)) / 2f64.powf((k + 1) as f64 / 2.0)
                })
                .collect();
            assert_eq!(d.iter().filter(|v| v.abs() > 1e-12).count(), 1, "level {}", k + 1);
            for (a, b) in d.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn four_hz_band_needs_more_than_four_hz_sampling() {
        let b = wavelet_bands(&[0.0; 64], 4.0);
        assert!(b[0].is_none() && b[1].is_some() && b[2].is_some());
        let b = wavelet_bands(&[0.0; 64], 32.0);
        assert_eq!(b[0].as_ref().unwrap().len(), 8);
    }
}
