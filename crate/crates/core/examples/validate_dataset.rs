//! Load the bundled dataset, then diagnose a deliberately broken copy.
//!
//!     cargo run --example validate_dataset [path.csv]

use story_effort::dataset::{diagnose, diagnose_file, Column, Dataset, BUNDLED_CSV};

fn main() {
    if let Some(path) = std::env::args().nth(1) {
        match diagnose_file(&path) {
            Ok(d) if d.is_clean() => println!("{path}: {} records", d.records.len()),
            Ok(d) => d.problems.iter().for_each(|p| println!("{path}: {p}")),
            Err(e) => println!("{path}: {e}"),
        }
        return;
    }

    let data = Dataset::bundled();
    println!("{}: {} projects", data.source, data.len());
    for c in Column::ALL {
        let v = data.column(c);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("  {:<14} min {lo:>7.1}  max {hi:>7.1}", c.name());
    }

    let broken = BUNDLED_CSV
        .replacen("P2,202,2.5,92", "P2,202,0,92", 1)
        .replacen("P3,173", "P1,173", 1);
    let d = diagnose(broken.as_bytes()).expect("header is intact");
    println!("\nbroken copy: {} usable rows", d.records.len());
    for p in &d.problems {
        println!("  {p}");
    }
}
