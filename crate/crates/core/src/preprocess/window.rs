use crate::error::{Error, Result};

pub const WINDOW_S: f64 = 60.0;
pub const WINDOW_SHIFT_S: f64 = 0.25;

/// A borrowed slice of a filtered recording.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<'a> {
    pub start_index: usize,
    pub samples: &'a [f64],
    pub sampling_rate: f64,
}

impl Window<'_> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start_time(&self) -> f64 {
        self.start_index as f64 / self.sampling_rate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation<'a> {
    pub windows: Vec<Window<'a>>,
    /// Set when the signal is shorter than a single window.
    pub too_short: bool,
}

/// Number of windows of `window_len` samples whose starts advance by
/// `shift_samples` (possibly fractional) within `n` samples.
pub(crate) fn window_count(n: usize, window_len: usize, shift_samples: f64) -> usize {
    if window_len == 0 || n < window_len {
        return 0;
    }
    ((n - window_len) as f64 / shift_samples + 1e-9).floor() as usize + 1
}

/// Splits a signal into windows of `window` seconds every `shift` seconds.
/// Window `k` starts at sample `round(k * shift * fs)`.
pub fn segment_windows(signal: &[f64], sampling_rate: f64, window: f64, shift: f64) -> Result<Segmentation<'_>> {
    if !(sampling_rate > 0.0 && window > 0.0 && shift > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling rate {sampling_rate}, window {window} s and shift {shift} s must be positive"
        )));
    }
    let window_len = (window * sampling_rate).round() as usize;
    let shift_samples = shift * sampling_rate;
    let count = window_count(signal.len(), window_len, shift_samples);
    let windows = (0..count)
        .map(|k| {
            let start = ((k as f64 * shift_samples).round() as usize).min(signal.len() - window_len);
            Window {
                start_index: start,
                samples: &signal[start..start + window_len],
                sampling_rate,
            }
        })
        .collect();
    Ok(Segmentation {
        windows,
        too_short: count == 0,
    })
}
