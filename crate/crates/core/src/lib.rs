//! Story-point agile effort estimation with LASSO and Elastic Net.
//!
//! The crate covers the whole experiment on a small project table: CSV
//! ingestion and min-max scaling ([`dataset`]), coordinate-descent
//! regression ([`linear`]), the MMRE/PRED accuracy battery ([`metrics`]),
//! k-fold grid search ([`selection`]), the default-vs-tuned experiment
//! ([`pipeline`]) and the rendered comparison report ([`report`]).
//!
//! ```no_run
//! use story_effort::prelude::*;
//!
//! let data = Dataset::bundled();
//! let spec = ScenarioSpec::new(ModelKind::Lasso, Tuning::GridSearch);
//! let run = run_scenario(&data, &spec).unwrap();
//! println!("MMRE {:.4}  PRED(25) {}", run.report.mmre, run.report.pred25);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dataset;
pub mod linear;
pub mod metrics;
pub mod pipeline;
pub mod published;
pub mod report;
pub mod selection;

pub mod prelude {
    pub use crate::dataset::{
        denormalize, fit_normalizer, load_dataset, normalize, train_test_split, Column, Dataset, NormalizationParams,
        ProjectRecord,
    };
    pub use crate::linear::{
        fit_elastic_net, fit_lasso, predict, verify_kkt, Coefficients, DesignMatrix, ModelConfig, ModelKind,
    };
    pub use crate::metrics::{evaluate_all, EvaluationReport, Scale};
    pub use crate::pipeline::{estimate, run_scenario, NormalizeOn, RunArtifact, SavedModel, ScenarioSpec, Tuning};
    pub use crate::report::{reproduce_tables, Reproduction};
    pub use crate::selection::{cross_val_score, grid_search, kfold_indices, GridSearchResult, HyperParamGrid};
}
