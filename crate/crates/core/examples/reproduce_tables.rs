//! The four-scenario comparison with published figures and a seed sweep.
//!
//!     cargo run --example reproduce_tables [md|csv|json]

use story_effort::dataset::Dataset;
use story_effort::report::{reproduce_tables, Format};

fn main() {
    let format: Format = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("md")
        .parse()
        .expect("md, csv or json");
    let seeds: Vec<u64> = (1..=10).collect();
    let repro = reproduce_tables(&Dataset::bundled(), &seeds);
    print!("{}", repro.render(format));
    for c in &repro.checks {
        eprintln!("{:?}: {} ({})", c.status, c.id, c.detail);
    }
}
