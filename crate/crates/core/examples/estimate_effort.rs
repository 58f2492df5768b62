//! Train the tuned LASSO model, save it, reload it and estimate a new project.
//!
//!     cargo run --example estimate_effort [story_points velocity]

use story_effort::dataset::Dataset;
use story_effort::linear::ModelKind;
use story_effort::pipeline::{estimate, run_scenario, ScenarioSpec, Tuning};

fn main() {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (sp, v) = match args[..] {
        [sp, v] => (sp, v),
        _ => (180.0, 3.3),
    };

    let run = run_scenario(
        &Dataset::bundled(),
        &ScenarioSpec::new(ModelKind::Lasso, Tuning::GridSearch),
    )
    .unwrap();
    let dir = std::env::temp_dir().join("story-effort-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    run.saved_model().save(&path).unwrap();
    println!("model (alpha {}) saved to {}", run.chosen_config.alpha, path.display());
    println!("{}", std::fs::read_to_string(&path).unwrap());

    let effort = estimate(&path, sp, v).unwrap();
    println!("{sp} story points at velocity {v}: estimated effort {effort:.2}");
    println!("story_points 0: {}", estimate(&path, 0.0, v).unwrap_err());
}
