//! Dataset and score file IO, reports, SVG plots and the `eam` command line
//! on top of `eam-core`.

pub mod cli;
pub mod data;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod scores;
pub mod selftest;
pub mod svg;

pub use data::{load_dataset, write_dataset_csv, LoadOptions, Loaded, RejectedRow, SchemaFile};
pub use error::{EvalError, Result};
pub use pipeline::{run_evaluation, EvaluateRequest, Evaluation, ModelSource};
pub use report::{write_outputs, EvaluationReport};
pub use scores::import_scores;
