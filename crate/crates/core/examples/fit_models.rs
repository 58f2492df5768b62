//! Fit LASSO and Elastic Net on the full normalized dataset along an alpha
//! path and verify optimality of each fit.
//!
//!     cargo run --example fit_models

use story_effort::dataset::{fit_normalizer, normalize, Dataset};
use story_effort::linear::{objective, verify_kkt, DesignMatrix, ModelConfig, ModelKind};

fn main() {
    let data = Dataset::bundled();
    let normed = normalize(&data, &fit_normalizer(&data).unwrap());
    let x = DesignMatrix::from_dataset(&normed).unwrap();

    println!(
        "{:<12} {:>7} {:>10} {:>10} {:>10} {:>7} {:>5}",
        "model", "alpha", "w_sp", "w_vel", "b", "sweeps", "kkt"
    );
    for kind in [ModelKind::Lasso, ModelKind::ElasticNet] {
        for alpha in [1e-4, 1e-3, 1e-2, 0.1, 1.0] {
            let cfg = ModelConfig::new(alpha, 0.5, 100_000).with_tol(1e-12);
            let c = kind.fit(&x, &cfg).unwrap();
            let used = if kind == ModelKind::Lasso {
                ModelConfig { l1_ratio: 1.0, ..cfg }
            } else {
                cfg
            };
            let kkt = verify_kkt(&c, &x, &used, 1e-6);
            println!(
                "{:<12} {:>7} {:>10.5} {:>10.5} {:>10.5} {:>7} {:>5}  obj {:.6}",
                kind.label(),
                alpha,
                c.weights[0],
                c.weights[1],
                c.intercept,
                c.n_sweeps_used,
                if kkt.passed { "ok" } else { "FAIL" },
                objective(&c, &x, &used)
            );
        }
    }
}
