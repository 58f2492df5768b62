//! Min-max scaling and the seeded hold-out split.
//!
//!     cargo run --example normalize_and_split [seed]

use story_effort::dataset::{denormalize, fit_normalizer, normalize, train_test_split, Column, Dataset};
use story_effort::pipeline::{DEFAULT_SEED, DEFAULT_TEST_FRACTION};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    let data = Dataset::bundled();
    let params = fit_normalizer(&data).unwrap();
    for c in Column::ALL {
        let r = params.range(c);
        println!("{:<14} [{}, {}]", c.name(), r.min, r.max);
    }

    let normed = normalize(&data, &params);
    let effort = normed.column(Column::ActualEffort);
    let back = denormalize(&effort, Column::ActualEffort, &params);
    let err = back
        .iter()
        .zip(data.column(Column::ActualEffort))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("round-trip max error: {err:e}");

    let (train, test) = train_test_split(&normed, DEFAULT_TEST_FRACTION, seed).unwrap();
    let ids = |d: &Dataset| {
        d.records
            .iter()
            .map(|r| r.project_id.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("seed {seed}: {} train / {} test", train.len(), test.len());
    println!("  test:  {}", ids(&test));
    println!("  train: {}", ids(&train));
}
