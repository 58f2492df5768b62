//! Five-fold grid search on the training partition of the default split.
//!
//!     cargo run --example grid_search_cv

use story_effort::dataset::{fit_normalizer, normalize, train_test_split, Dataset};
use story_effort::linear::{DesignMatrix, ModelKind};
use story_effort::pipeline::{default_config, DEFAULT_K_FOLDS, DEFAULT_SEED, DEFAULT_TEST_FRACTION};
use story_effort::selection::{grid_search, HyperParamGrid};

fn main() {
    let data = Dataset::bundled();
    let normed = normalize(&data, &fit_normalizer(&data).unwrap());
    let (train, _) = train_test_split(&normed, DEFAULT_TEST_FRACTION, DEFAULT_SEED).unwrap();
    let x = DesignMatrix::from_dataset(&train).unwrap();
    let grid = HyperParamGrid::default();

    for kind in [ModelKind::Lasso, ModelKind::ElasticNet] {
        let base = default_config(kind).with_seed(Some(DEFAULT_SEED));
        let r = grid_search(&x, &grid, DEFAULT_K_FOLDS, DEFAULT_SEED, kind, &base).unwrap();
        let mut ranked = r.all_scores.clone();
        ranked.sort_by(|a, b| a.mean_mse.total_cmp(&b.mean_mse));
        println!(
            "{}: {} candidates, best {:?}",
            kind.label(),
            r.all_scores.len(),
            (r.best_config.alpha, r.best_config.l1_ratio, r.best_config.max_iter)
        );
        for s in ranked.iter().take(5) {
            println!(
                "  alpha {:<7} l1 {:<6} max_iter {:<5} cv mse {:.6}",
                s.config.alpha, s.config.l1_ratio, s.config.max_iter, s.mean_mse
            );
        }
    }
}
