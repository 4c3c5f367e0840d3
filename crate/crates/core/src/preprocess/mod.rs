//! Filtering, resampling and sliding-window segmentation.

mod filter;
mod resample;
mod window;

pub use filter::{bandpass_filter, lowpass_filter, Sos, ECG_BANDPASS_ORDER, EDA_LOWPASS_ORDER};
pub use resample::resample;
pub use window::{segment_windows, Segmentation, Window, WINDOW_SHIFT_S, WINDOW_S};
