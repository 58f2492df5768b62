//! Every accuracy metric on a small hand-made example.
//!
//!     cargo run --example metrics_battery

use story_effort::metrics::{evaluate_all, mre_each, EvaluationReport, Scale};

fn main() {
    let actual = [63.0, 92.0, 56.0, 86.0, 32.0];
    let estimated = [60.0, 80.0, 58.0, 100.0, 45.0];

    for (a, e, m) in actual
        .iter()
        .zip(&estimated)
        .zip(mre_each(&actual, &estimated).unwrap())
        .map(|((a, e), m)| (a, e, m))
    {
        println!("actual {a:>5}  estimate {e:>5}  MRE {m:.4}");
    }
    let r = evaluate_all(&actual, &estimated, Scale::Original).unwrap();
    println!("\n{}\n{}", EvaluationReport::CSV_HEADER, r.csv_row());

    // a zero actual value leaves MRE undefined; the error names the index
    match evaluate_all(&[0.0, 1.0], &[0.5, 1.0], Scale::Normalized) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nwith a zero actual: {e}"),
    }
}
