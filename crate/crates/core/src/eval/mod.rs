//! Metrics, cross-validation, model selection and the evaluation matrix.

pub mod cv;
pub mod matrix;
pub mod metrics;
mod report;
pub mod select;
pub mod stats;

pub use cv::{grouped_kfold, stratified_kfold, FoldUnit, Split};
pub use matrix::{
    average_folds, run_cell, run_matrix, Candidate, CellResult, EvalMode, EvalOptions, MatrixReport, Record,
    TrainTestConfig,
};
pub use metrics::{auroc, confusion, recalls, Confusion, EvalTuple};
pub use select::{select_best, select_best_combo, MIN_NON_ANXIOUS_RECALL};
pub use stats::{group_stats, GroupStats};
