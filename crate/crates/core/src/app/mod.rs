//! Batch commands behind the `anxbench` binary.

mod commands;
mod config;

pub use commands::{
    cmd_features, cmd_importance, cmd_matrix, cmd_similarity, cmd_synth, dataset_matrix, importance_tables,
    matrix_report, prepare, similarity_rows, SimilarityRow,
};
pub use config::{CleanConfig, ComboSelection, DatasetConfig, MatrixConfig, Overrides, PruneMode, RunConfig};

use crate::error::Error;

/// Process exit status for an error: 1 for usage or configuration problems,
/// 2 for bad or unusable data, 3 for violated internal invariants.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) => 1,
        Error::Invariant(_) => 3,
        Error::Parse { .. }
        | Error::DegenerateLabels(_)
        | Error::SchemaMismatch { .. }
        | Error::SplitTooSmall(_)
        | Error::MissingClass(_)
        | Error::LabelsUnavailable(_)
        | Error::Data(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => 2,
    }
}
