//! End-to-end experiment: normalize, split, fit (default or grid-searched
//! hyperparameters), evaluate on the held-out projects.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{
    denormalize, fit_normalizer, normalize, split_indices, test_count, Column, Dataset, DatasetError,
    NormalizationParams, SplitIndices,
};
use crate::linear::{predict, Coefficients, DesignMatrix, FitError, ModelConfig, ModelKind};
use crate::metrics::{evaluate_all, EvaluationReport, MetricError, Scale};
use crate::published::{self, PublishedRow};
use crate::selection::{grid_search, GridSearchResult, HyperParamGrid, SelectionError};

pub const DEFAULT_SEED: u64 = 120;
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;
pub const DEFAULT_K_FOLDS: usize = 5;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("normalization: {0}")]
    Normalize(#[source] DatasetError),
    #[error("train-test split: {0}")]
    Split(#[source] DatasetError),
    #[error("design matrix: {0}")]
    Design(#[source] FitError),
    #[error("training with default parameters: {0}")]
    Fit(#[source] FitError),
    #[error("grid search: {0}")]
    Tune(#[source] SelectionError),
    #[error("evaluation: {0}")]
    Evaluate(#[source] MetricError),
    #[error("model file {path}: {message}")]
    ModelFile { path: String, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tuning {
    Default,
    GridSearch,
}

/// Which rows the min-max parameters are fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeOn {
    /// Whole dataset, before splitting.
    #[default]
    Full,
    /// Training partition only.
    Train,
}

impl fmt::Display for NormalizeOn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizeOn::Full => "full",
            NormalizeOn::Train => "train",
        })
    }
}

/// Hyperparameters used when no tuning happens: alpha 1.0, l1_ratio 0.5,
/// 1000 sweeps, no random state. LASSO forces l1_ratio to 1.
pub fn default_config(kind: ModelKind) -> ModelConfig {
    let base = ModelConfig::default();
    match kind {
        ModelKind::Lasso => ModelConfig { l1_ratio: 1.0, ..base },
        ModelKind::ElasticNet => base,
    }
}

/// One experimental condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub model_kind: ModelKind,
    pub tuning: Tuning,
    pub split_seed: u64,
    pub test_fraction: f64,
    /// Absolute test-set size; overrides `test_fraction` when set.
    pub test_size: Option<usize>,
    pub k_folds: usize,
    pub grid: HyperParamGrid,
    pub metric_scale: Scale,
    pub normalize_on: NormalizeOn,
}

impl ScenarioSpec {
    pub fn new(model_kind: ModelKind, tuning: Tuning) -> Self {
        ScenarioSpec {
            model_kind,
            tuning,
            split_seed: DEFAULT_SEED,
            test_fraction: DEFAULT_TEST_FRACTION,
            test_size: None,
            k_folds: DEFAULT_K_FOLDS,
            grid: HyperParamGrid::default(),
            metric_scale: Scale::Normalized,
            normalize_on: NormalizeOn::Full,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.split_seed = seed;
        self
    }

    /// Row label matching the published comparison table.
    pub fn label(&self) -> String {
        match self.tuning {
            Tuning::Default => format!("{} with default parameters", self.model_kind.label()),
            Tuning::GridSearch => format!("{} with Tuning", self.model_kind.label()),
        }
    }

    /// Key of the matching published row in `data/published.csv`.
    pub fn published_key(&self) -> &'static str {
        match (self.model_kind, self.tuning) {
            (ModelKind::ElasticNet, Tuning::Default) => "table2-enet-default",
            (ModelKind::Lasso, Tuning::Default) => "table2-lasso-default",
            (ModelKind::ElasticNet, Tuning::GridSearch) => "table2-enet-tuned",
            (ModelKind::Lasso, Tuning::GridSearch) => "table2-lasso-tuned",
        }
    }
}

/// The four default/tuned × Elastic Net/LASSO conditions, in table order.
pub fn table2_scenarios(template: &ScenarioSpec) -> Vec<ScenarioSpec> {
    [
        (ModelKind::ElasticNet, Tuning::Default),
        (ModelKind::Lasso, Tuning::Default),
        (ModelKind::ElasticNet, Tuning::GridSearch),
        (ModelKind::Lasso, Tuning::GridSearch),
    ]
    .into_iter()
    .map(|(model_kind, tuning)| ScenarioSpec {
        model_kind,
        tuning,
        ..template.clone()
    })
    .collect()
}

/// A trained scenario before evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFit {
    pub scenario: ScenarioSpec,
    pub fitted: Coefficients,
    pub chosen_config: ModelConfig,
    pub grid_result: Option<GridSearchResult>,
    pub normalization: NormalizationParams,
    pub split: SplitIndices,
    pub test_ids: Vec<String>,
    /// Held-out targets and predictions on the normalized scale.
    pub test_actual: Vec<f64>,
    pub test_predicted: Vec<f64>,
    /// Held-out targets in original effort units.
    pub test_actual_original: Vec<f64>,
}

impl ScenarioFit {
    /// Metrics on the normalized scale, or on original units after mapping
    /// the predictions back through the target's min-max range.
    pub fn evaluate(&self, scale: Scale) -> Result<EvaluationReport, MetricError> {
        match scale {
            Scale::Normalized => evaluate_all(&self.test_actual, &self.test_predicted, scale),
            Scale::Original => evaluate_all(&self.test_actual_original, &self.test_predicted_original(), scale),
        }
    }

    pub fn test_predicted_original(&self) -> Vec<f64> {
        denormalize(&self.test_predicted, Column::ActualEffort, &self.normalization)
    }

    pub fn saved_model(&self) -> SavedModel {
        SavedModel {
            model_kind: self.scenario.model_kind,
            coefficients: self.fitted.clone(),
            config: self.chosen_config,
            normalization: self.normalization,
        }
    }
}

/// Everything produced by one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub scenario: ScenarioSpec,
    pub fitted: Coefficients,
    pub chosen_config: ModelConfig,
    /// Held-out metrics on `scenario.metric_scale`.
    pub report: EvaluationReport,
    /// Published figures for the same condition.
    pub published_targets: Option<PublishedRow>,
    /// Everything else the run produced (split, predictions, grid scores).
    pub details: ScenarioFit,
}

impl RunArtifact {
    pub fn evaluate(&self, scale: Scale) -> Result<EvaluationReport, MetricError> {
        self.details.evaluate(scale)
    }

    pub fn saved_model(&self) -> SavedModel {
        self.details.saved_model()
    }
}

/// Runs normalization, split, training and evaluation for one scenario.
pub fn run_scenario(data: &Dataset, spec: &ScenarioSpec) -> Result<RunArtifact, PipelineError> {
    let fit = fit_scenario(data, spec)?;
    let report = fit.evaluate(spec.metric_scale).map_err(PipelineError::Evaluate)?;
    Ok(RunArtifact {
        scenario: spec.clone(),
        fitted: fit.fitted.clone(),
        chosen_config: fit.chosen_config,
        report,
        published_targets: published::by_key(spec.published_key()),
        details: fit,
    })
}

/// Normalization, split and training, without the evaluation step.
///
/// Grid search only ever sees the training partition; the chosen
/// hyperparameters are then refitted on the whole training partition.
pub fn fit_scenario(data: &Dataset, spec: &ScenarioSpec) -> Result<ScenarioFit, PipelineError> {
    let n = data.len();
    let test_size = match spec.test_size {
        Some(s) => s,
        None => test_count(n, spec.test_fraction).map_err(PipelineError::Split)?,
    };

    let (params, split) = match spec.normalize_on {
        NormalizeOn::Full => {
            let params = fit_normalizer(data).map_err(PipelineError::Normalize)?;
            let split = split_indices(n, test_size, spec.split_seed).map_err(PipelineError::Split)?;
            (params, split)
        }
        NormalizeOn::Train => {
            let split = split_indices(n, test_size, spec.split_seed).map_err(PipelineError::Split)?;
            let params = fit_normalizer(&data.subset(&split.train)).map_err(PipelineError::Normalize)?;
            (params, split)
        }
    };
    let scaled = normalize(data, &params);
    let train = DesignMatrix::from_dataset(&scaled.subset(&split.train)).map_err(PipelineError::Design)?;
    let test = DesignMatrix::from_dataset(&scaled.subset(&split.test)).map_err(PipelineError::Design)?;

    let (chosen_config, grid_result) = match spec.tuning {
        Tuning::Default => (default_config(spec.model_kind), None),
        Tuning::GridSearch => {
            let base = ModelConfig::default().with_seed(Some(spec.split_seed));
            let result = grid_search(
                &train,
                &spec.grid,
                spec.k_folds,
                spec.split_seed,
                spec.model_kind,
                &base,
            )
            .map_err(PipelineError::Tune)?;
            (result.best_config, Some(result))
        }
    };
    let fitted = spec
        .model_kind
        .fit(&train, &chosen_config)
        .map_err(|e| match spec.tuning {
            Tuning::Default => PipelineError::Fit(e),
            Tuning::GridSearch => PipelineError::Tune(SelectionError::Fit(e)),
        })?;
    let test_predicted = predict(&fitted, &test).map_err(PipelineError::Design)?;

    let test_records = data.subset(&split.test);
    Ok(ScenarioFit {
        scenario: spec.clone(),
        fitted,
        chosen_config,
        grid_result,
        normalization: params,
        test_ids: test_records.records.iter().map(|r| r.project_id.clone()).collect(),
        test_actual: test.target().to_vec(),
        test_predicted,
        test_actual_original: test_records.column(Column::ActualEffort),
        split,
    })
}

/// On-disk model: coefficients, the hyperparameters that produced them and
/// the min-max parameters needed to apply them to raw inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub model_kind: ModelKind,
    #[serde(flatten)]
    pub coefficients: Coefficients,
    pub config: ModelConfig,
    pub normalization: NormalizationParams,
}

impl SavedModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes") + "\n"
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PipelineError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| PipelineError::ModelFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let model_err = |message: String| PipelineError::ModelFile {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| model_err(e.to_string()))?;
        let model: SavedModel = serde_json::from_str(&text).map_err(|e| model_err(e.to_string()))?;
        if model.coefficients.weights.len() != 2 {
            return Err(model_err(format!(
                "expected 2 weights, found {}",
                model.coefficients.weights.len()
            )));
        }
        if !model.normalization.is_valid() {
            return Err(model_err("normalization ranges must satisfy max > min".into()));
        }
        Ok(model)
    }

    /// Effort in original units for a new project.
    pub fn estimate(&self, story_points: f64, velocity: f64) -> Result<f64, PipelineError> {
        if !(story_points > 0.0) || !story_points.is_finite() {
            return Err(PipelineError::InvalidInput(format!(
                "story_points must be positive, got {story_points}"
            )));
        }
        if !(velocity > 0.0) || !velocity.is_finite() {
            return Err(PipelineError::InvalidInput(format!(
                "velocity must be positive, got {velocity}"
            )));
        }
        let p = &self.normalization;
        let row = [p.story_points.scale(story_points), p.velocity.scale(velocity)];
        let y = self.coefficients.predict_row(&row);
        Ok(p.actual_effort.unscale(y))
    }
}

/// Loads a saved model and applies it to one project.
pub fn estimate(model_file: impl AsRef<Path>, story_points: f64, velocity: f64) -> Result<f64, PipelineError> {
    SavedModel::load(model_file)?.estimate(story_points, velocity)
}
