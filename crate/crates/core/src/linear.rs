//! Penalized least squares by cyclic coordinate descent.
//!
//! Both estimators minimise
//!
//! ```text
//! (1/(2n)) * ||y - Xw - b||² + alpha * l1_ratio * ||w||₁ + (alpha * (1 - l1_ratio) / 2) * ||w||²
//! ```
//!
//! over the weights `w` and an unpenalized intercept `b`. LASSO is the
//! `l1_ratio = 1` case. In the unscaled form `||Xw - y||² + δ||w||₁` the L1
//! weight is `δ = 2n * alpha * l1_ratio`; the L2 weight of the unscaled
//! Elastic Net form is `n * alpha * (1 - l1_ratio)`.
//!
//! Inputs are used as given. The pipeline feeds min-max scaled columns, so
//! no standardization happens here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Column, Dataset};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("design matrix has no rows")]
    Empty,
    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("column {column} has {got} rows, expected {expected}")]
    RaggedColumn { column: usize, expected: usize, got: usize },
}

/// Hyperparameters of a single fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Overall penalty strength.
    pub alpha: f64,
    /// Share of the penalty that is L1; 1 is LASSO, 0 is ridge.
    pub l1_ratio: f64,
    /// Budget of full coordinate sweeps.
    pub max_iter: usize,
    /// Stop once the largest coefficient change in a sweep drops below this.
    pub tol: f64,
    /// Kept alongside the other hyperparameters for reporting; the cyclic
    /// solver never reads it.
    pub seed: Option<u64>,
}

pub const DEFAULT_TOL: f64 = 1e-4;

impl Default for ModelConfig {
    /// Library defaults: alpha 1.0, l1_ratio 0.5, 1000 sweeps.
    fn default() -> Self {
        ModelConfig {
            alpha: 1.0,
            l1_ratio: 0.5,
            max_iter: 1000,
            tol: DEFAULT_TOL,
            seed: None,
        }
    }
}

impl ModelConfig {
    pub fn new(alpha: f64, l1_ratio: f64, max_iter: usize) -> Self {
        ModelConfig {
            alpha,
            l1_ratio,
            max_iter,
            ..Default::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), FitError> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(FitError::InvalidConfig(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.l1_ratio) {
            return Err(FitError::InvalidConfig(format!(
                "l1_ratio must lie in [0, 1], got {}",
                self.l1_ratio
            )));
        }
        if self.max_iter == 0 {
            return Err(FitError::InvalidConfig("max_iter must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(FitError::InvalidConfig(format!("tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }

    fn l1_penalty(&self) -> f64 {
        self.alpha * self.l1_ratio
    }

    fn l2_penalty(&self) -> f64 {
        self.alpha * (1.0 - self.l1_ratio)
    }
}

/// Feature columns plus target, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    columns: Vec<Vec<f64>>,
    target: Vec<f64>,
}

impl DesignMatrix {
    /// Builds from feature columns (each of length n) and a target of length n.
    pub fn from_columns(columns: Vec<Vec<f64>>, target: Vec<f64>) -> Result<Self, FitError> {
        let n = target.len();
        if n == 0 {
            return Err(FitError::Empty);
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(FitError::RaggedColumn {
                    column: j,
                    expected: n,
                    got: c.len(),
                });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(FitError::NonFinite("features"));
            }
        }
        if target.iter().any(|v| !v.is_finite()) {
            return Err(FitError::NonFinite("target"));
        }
        Ok(DesignMatrix { columns, target })
    }

    /// Builds from row-major features.
    pub fn from_rows(rows: &[Vec<f64>], target: Vec<f64>) -> Result<Self, FitError> {
        let p = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); p];
        for row in rows {
            if row.len() != p {
                return Err(FitError::DimensionMismatch {
                    expected: p,
                    got: row.len(),
                });
            }
            for (c, &v) in columns.iter_mut().zip(row) {
                c.push(v);
            }
        }
        if rows.len() != target.len() {
            return Err(FitError::RaggedColumn {
                column: 0,
                expected: target.len(),
                got: rows.len(),
            });
        }
        Self::from_columns(columns, target)
    }

    /// Features `(story_points, velocity)`, target `actual_effort`.
    pub fn from_dataset(data: &Dataset) -> Result<Self, FitError> {
        Self::from_columns(
            vec![data.column(Column::StoryPoints), data.column(Column::Velocity)],
            data.column(Column::ActualEffort),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// Rows at the given positions, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> DesignMatrix {
        DesignMatrix {
            columns: self
                .columns
                .iter()
                .map(|c| rows.iter().map(|&i| c[i]).collect())
                .collect(),
            target: rows.iter().map(|&i| self.target[i]).collect(),
        }
    }
}

/// A fitted linear model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub n_sweeps_used: usize,
    pub converged: bool,
}

impl Coefficients {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>()
    }
}

/// `sign(z) * max(|z| - gamma, 0)`.
pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0);
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Penalized objective at `(coeffs.weights, coeffs.intercept)`.
pub fn objective(coeffs: &Coefficients, data: &DesignMatrix, config: &ModelConfig) -> f64 {
    let n = data.n_rows() as f64;
    let rss: f64 = (0..data.n_rows())
        .map(|i| {
            let r = data.target[i] - coeffs.predict_row(&data.row(i));
            r * r
        })
        .sum();
    let l1: f64 = coeffs.weights.iter().map(|w| w.abs()).sum();
    let l2: f64 = coeffs.weights.iter().map(|w| w * w).sum();
    rss / (2.0 * n) + config.l1_penalty() * l1 + 0.5 * config.l2_penalty() * l2
}

/// Elastic Net by cyclic coordinate descent on centered data.
///
/// Each sweep visits features `0..p` in order. The loop stops when the largest
/// absolute weight change in a sweep is below `config.tol`, or after
/// `config.max_iter` sweeps, in which case `converged` is false and a warning
/// is logged.
pub fn fit_elastic_net(data: &DesignMatrix, config: &ModelConfig) -> Result<Coefficients, FitError> {
    config.validate()?;
    let n = data.n_rows();
    let p = data.n_features();
    let nf = n as f64;

    let x_mean: Vec<f64> = data.columns.iter().map(|c| mean(c)).collect();
    let y_mean = mean(&data.target);
    let xc: Vec<Vec<f64>> = data
        .columns
        .iter()
        .zip(&x_mean)
        .map(|(c, m)| c.iter().map(|v| v - m).collect())
        .collect();
    let sq_norm: Vec<f64> = xc.iter().map(|c| dot(c, c) / nf).collect();

    let l1 = config.l1_penalty();
    let l2 = config.l2_penalty();

    let mut w = vec![0.0; p];
    // residual of the centered problem: yc - Xc w
    let mut resid: Vec<f64> = data.target.iter().map(|v| v - y_mean).collect();

    let centered_objective = |w: &[f64], resid: &[f64]| -> f64 {
        dot(resid, resid) / (2.0 * nf) + l1 * w.iter().map(|v| v.abs()).sum::<f64>() + 0.5 * l2 * dot(w, w)
    };
    let mut last_obj = if cfg!(debug_assertions) {
        centered_objective(&w, &resid)
    } else {
        0.0
    };

    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < config.max_iter {
        sweeps += 1;
        let mut max_delta = 0.0f64;
        for j in 0..p {
            let old = w[j];
            let denom = sq_norm[j] + l2;
            let new = if sq_norm[j] == 0.0 || denom == 0.0 {
                0.0
            } else {
                let rho = dot(&xc[j], &resid) / nf + sq_norm[j] * old;
                soft_threshold(rho, l1) / denom
            };
            let delta = new - old;
            if delta != 0.0 {
                for (r, x) in resid.iter_mut().zip(&xc[j]) {
                    *r -= x * delta;
                }
                w[j] = new;
            }
            max_delta = max_delta.max(delta.abs());
        }
        if cfg!(debug_assertions) {
            let obj = centered_objective(&w, &resid);
            debug_assert!(
                obj <= last_obj + 1e-12 * (1.0 + last_obj.abs()),
                "objective increased from {last_obj} to {obj} in sweep {sweeps}"
            );
            last_obj = obj;
        }
        if max_delta < config.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "coordinate descent stopped after {} sweeps without reaching tol {} (alpha {}, l1_ratio {})",
            sweeps,
            config.tol,
            config.alpha,
            config.l1_ratio
        );
    }

    let intercept = y_mean - dot(&x_mean, &w);
    if !intercept.is_finite() || w.iter().any(|v| !v.is_finite()) {
        return Err(FitError::NonFinite("coefficients"));
    }
    Ok(Coefficients {
        weights: w,
        intercept,
        n_sweeps_used: sweeps,
        converged,
    })
}

/// LASSO: the Elastic Net fit with `l1_ratio` forced to 1.
pub fn fit_lasso(data: &DesignMatrix, config: &ModelConfig) -> Result<Coefficients, FitError> {
    let config = ModelConfig {
        l1_ratio: 1.0,
        ..*config
    };
    fit_elastic_net(data, &config)
}

/// Which estimator to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Lasso,
    ElasticNet,
}

impl ModelKind {
    pub fn fit(self, data: &DesignMatrix, config: &ModelConfig) -> Result<Coefficients, FitError> {
        match self {
            ModelKind::Lasso => fit_lasso(data, config),
            ModelKind::ElasticNet => fit_elastic_net(data, config),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Lasso => "LASSO",
            ModelKind::ElasticNet => "Elastic Net",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Lasso => "lasso",
            ModelKind::ElasticNet => "elastic_net",
        })
    }
}

/// `X w + b` for every row of `data`.
pub fn predict(coeffs: &Coefficients, data: &DesignMatrix) -> Result<Vec<f64>, FitError> {
    if coeffs.weights.len() != data.n_features() {
        return Err(FitError::DimensionMismatch {
            expected: coeffs.weights.len(),
            got: data.n_features(),
        });
    }
    Ok((0..data.n_rows()).map(|i| coeffs.predict_row(&data.row(i))).collect())
}

/// Outcome of an optimality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KktReport {
    pub passed: bool,
    /// Per-weight violation: zero when the condition holds exactly.
    pub residuals: Vec<f64>,
    /// Smooth-part gradient `g_j` for each weight.
    pub gradients: Vec<f64>,
    /// Mean residual `mean(y - Xw - b)`.
    pub intercept_residual: f64,
}

/// Checks the subgradient optimality conditions of the Elastic Net objective.
///
/// With `g_j = -(1/n) x_jᵀ(y - Xw - b) + alpha (1 - l1_ratio) w_j`:
/// nonzero weights need `|g_j + alpha l1_ratio sign(w_j)| <= tol_kkt`, zero
/// weights need `|g_j| <= alpha l1_ratio + tol_kkt`, and the intercept needs
/// `|mean residual| <= tol_kkt`.
pub fn verify_kkt(coeffs: &Coefficients, data: &DesignMatrix, config: &ModelConfig, tol_kkt: f64) -> KktReport {
    let n = data.n_rows() as f64;
    let resid: Vec<f64> = (0..data.n_rows())
        .map(|i| data.target[i] - coeffs.predict_row(&data.row(i)))
        .collect();
    let l1 = config.l1_penalty();
    let l2 = config.l2_penalty();

    let gradients: Vec<f64> = coeffs
        .weights
        .iter()
        .enumerate()
        .map(|(j, &w)| -dot(&data.columns[j], &resid) / n + l2 * w)
        .collect();
    let residuals: Vec<f64> = coeffs
        .weights
        .iter()
        .zip(&gradients)
        .map(|(&w, &g)| {
            if w != 0.0 {
                (g + l1 * w.signum()).abs()
            } else {
                (g.abs() - l1).max(0.0)
            }
        })
        .collect();
    let intercept_residual = mean(&resid);
    let passed = residuals.iter().all(|&r| r <= tol_kkt) && intercept_residual.abs() <= tol_kkt;
    KktReport {
        passed,
        residuals,
        gradients,
        intercept_residual,
    }
}
