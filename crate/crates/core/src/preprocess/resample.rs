use crate::error::{Error, Result};

/// Linear-interpolation resampling; output length is
/// `round(len * to_fs / from_fs)`.
pub fn resample(signal: &[f64], from_fs: f64, to_fs: f64) -> Result<Vec<f64>> {
    if !(from_fs > 0.0 && to_fs > 0.0) {
        return Err(Error::InvalidParameter("sampling rates must be positive".into()));
    }
    if from_fs == to_fs || signal.is_empty() {
        return Ok(signal.to_vec());
    }
    let n_out = (signal.len() as f64 * to_fs / from_fs).round() as usize;
    let last = signal.len() - 1;
    Ok((0..n_out)
        .map(|i| {
            let pos = i as f64 * from_fs / to_fs;
            let k = pos.floor() as usize;
            if k >= last {
                return signal[last];
            }
            let frac = pos - k as f64;
            signal[k] + frac * (signal[k + 1] - signal[k])
        })
        .collect())
}
