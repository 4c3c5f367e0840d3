//! Feature matrices: schema, labeling, extraction from recordings, missing
//! values, correlation pruning, combinations and standardization.

mod clean;
mod extract;
mod labels;
mod matrix;
mod schema;

pub use clean::{
    correlation_keep, correlation_keep_per_part, correlation_prune, drop_missing, standardize, unusable_rows,
    MissingPolicy, Standardizer, CORRELATION_THRESHOLD,
};
pub use extract::{clean_ecg, clean_eda, extract_dataset, extract_session, PipelineConfig};
pub use labels::{label_from_paq, paq_score, Label, ANXIOUS_THRESHOLD};
pub use matrix::{FeatureMatrix, GroupKey};
pub use schema::{enumerate_combos, full_schema, Column, FeatureCombo, FeatureSet};
