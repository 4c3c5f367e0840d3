//! Biosignal feature extraction and a cross-dataset generalizability harness
//! for anxiety detection from wearable ECG and EDA.
//!
//! The crate follows the pipeline end to end:
//!
//! * [`signal`]: portable recording/questionnaire formats and synthetic
//!   generators with exact ground truth.
//! * [`preprocess`]: zero-phase Butterworth filtering, resampling and
//!   60 s / 0.25 s sliding windows.
//! * [`ecg`]: R-peak detection and the HRV feature sets F1–F4.
//! * [`eda`]: tonic/phasic decomposition, SCR events, Haar wavelet bands and
//!   the F5 feature set.
//! * [`features`]: labeled feature matrices, cleaning, correlation pruning and
//!   the 31 feature-set combinations.
//! * [`models`]: logistic regression, random forest, CART, linear SVM,
//!   gradient boosting and a dense network, all seeded.
//! * [`eval`]: recalls, AUROC, stratified k-fold, recall-gated model selection
//!   and the train/test generalizability matrix.
//! * [`similarity`]: optimal-transport dataset distance.
//! * [`app`]: batch commands behind the `anxbench` binary.

pub mod app;
pub mod ecg;
pub mod eda;
pub mod error;
pub mod eval;
pub mod features;
pub mod models;
mod numeric;
pub mod preprocess;
pub mod seed;
pub mod signal;
pub mod similarity;

pub use error::{Error, Result};
