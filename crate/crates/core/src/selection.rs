//! K-fold cross-validation and exhaustive grid search.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::permutation;
use crate::linear::{predict, DesignMatrix, FitError, ModelConfig, ModelKind};
use crate::metrics;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error("need 2 <= k <= n folds, got k = {k} for n = {n}")]
    BadFoldCount { n: usize, k: usize },
    #[error("hyperparameter grid has an empty `{0}` list")]
    EmptyGrid(&'static str),
    #[error("every grid candidate failed to fit")]
    AllCandidatesFailed,
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Splits a seeded permutation of `0..n` into `k` contiguous folds. The first
/// `n % k` folds get one extra index.
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, SelectionError> {
    if k < 2 || k > n {
        return Err(SelectionError::BadFoldCount { n, k });
    }
    let perm = permutation(n, seed);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        folds.push(perm[start..start + size].to_vec());
        start += size;
    }
    Ok(folds)
}

fn complement(n: usize, fold: &[usize]) -> Vec<usize> {
    let mut held = vec![false; n];
    for &i in fold {
        held[i] = true;
    }
    (0..n).filter(|&i| !held[i]).collect()
}

fn score_folds(
    data: &DesignMatrix,
    folds: &[Vec<usize>],
    config: &ModelConfig,
    kind: ModelKind,
) -> Result<Vec<f64>, SelectionError> {
    folds
        .iter()
        .map(|fold| {
            let train = data.select_rows(&complement(data.n_rows(), fold));
            let valid = data.select_rows(fold);
            let coeffs = kind.fit(&train, config)?;
            let pred = predict(&coeffs, &valid)?;
            Ok(metrics::mse(valid.target(), &pred).expect("fold is non-empty and lengths match"))
        })
        .collect()
}

/// Mean validation MSE over `k` folds, plus the per-fold values.
pub fn cross_val_score(
    data: &DesignMatrix,
    config: &ModelConfig,
    k: usize,
    seed: u64,
    kind: ModelKind,
) -> Result<(f64, Vec<f64>), SelectionError> {
    let folds = kfold_indices(data.n_rows(), k, seed)?;
    let per_fold = score_folds(data, &folds, config, kind)?;
    Ok((mean(&per_fold), per_fold))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Candidate lattice. Enumeration order is alphas, then l1_ratios, then
/// max_iters (innermost).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParamGrid {
    pub alphas: Vec<f64>,
    pub l1_ratios: Vec<f64>,
    pub max_iters: Vec<usize>,
}

impl Default for HyperParamGrid {
    fn default() -> Self {
        HyperParamGrid {
            alphas: vec![0.0001, 0.001, 0.01, 0.1, 1.0],
            l1_ratios: vec![0.001, 0.25, 0.5, 0.75, 1.0],
            max_iters: vec![25, 100, 1000],
        }
    }
}

impl HyperParamGrid {
    pub fn validate(&self) -> Result<(), SelectionError> {
        if self.alphas.is_empty() {
            return Err(SelectionError::EmptyGrid("alphas"));
        }
        if self.l1_ratios.is_empty() {
            return Err(SelectionError::EmptyGrid("l1_ratios"));
        }
        if self.max_iters.is_empty() {
            return Err(SelectionError::EmptyGrid("max_iters"));
        }
        Ok(())
    }

    /// Candidates in enumeration order. For LASSO the l1_ratio axis collapses
    /// to the single value 1.
    pub fn candidates(&self, kind: ModelKind, base: &ModelConfig) -> Vec<ModelConfig> {
        let ratios: &[f64] = match kind {
            ModelKind::Lasso => &[1.0],
            ModelKind::ElasticNet => &self.l1_ratios,
        };
        let mut out = Vec::with_capacity(self.alphas.len() * ratios.len() * self.max_iters.len());
        for &alpha in &self.alphas {
            for &l1_ratio in ratios {
                for &max_iter in &self.max_iters {
                    out.push(ModelConfig {
                        alpha,
                        l1_ratio,
                        max_iter,
                        ..*base
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub config: ModelConfig,
    pub mean_mse: f64,
    pub fold_mse: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCandidate {
    pub config: ModelConfig,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_config: ModelConfig,
    pub best_cv_score: f64,
    pub all_scores: Vec<CandidateScore>,
    pub skipped: Vec<SkippedCandidate>,
}

impl GridSearchResult {
    pub const CSV_HEADER: &'static str = "alpha,l1_ratio,max_iter,mean_mse,fold_mse";

    /// One line per scored candidate; per-fold scores are `;`-separated.
    pub fn scores_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.all_scores {
            let folds: Vec<String> = s.fold_mse.iter().map(f64::to_string).collect();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.config.alpha,
                s.config.l1_ratio,
                s.config.max_iter,
                s.mean_mse,
                folds.join(";")
            ));
        }
        out
    }
}

/// Scores every candidate by `k`-fold CV MSE on one shared fold assignment
/// and returns the first candidate with the lowest mean.
///
/// Candidates whose fit fails are logged and listed in `skipped`.
pub fn grid_search(
    data: &DesignMatrix,
    grid: &HyperParamGrid,
    k: usize,
    seed: u64,
    kind: ModelKind,
    base: &ModelConfig,
) -> Result<GridSearchResult, SelectionError> {
    grid.validate()?;
    let folds = kfold_indices(data.n_rows(), k, seed)?;

    let mut all_scores = Vec::new();
    let mut skipped = Vec::new();
    for config in grid.candidates(kind, base) {
        match score_folds(data, &folds, &config, kind) {
            Ok(fold_mse) => all_scores.push(CandidateScore {
                config,
                mean_mse: mean(&fold_mse),
                fold_mse,
            }),
            Err(e) => {
                log::warn!("skipping candidate {config:?}: {e}");
                skipped.push(SkippedCandidate {
                    config,
                    reason: e.to_string(),
                });
            }
        }
    }

    let best = all_scores
        .iter()
        .fold(None::<&CandidateScore>, |best, s| match best {
            Some(b) if b.mean_mse <= s.mean_mse => Some(b),
            _ => Some(s),
        })
        .ok_or(SelectionError::AllCandidatesFailed)?;
    Ok(GridSearchResult {
        best_config: best.config,
        best_cv_score: best.mean_mse,
        all_scores: all_scores.clone(),
        skipped,
    })
}
