//! Acceptance suite: one PASS/WARN/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed regardless of
//! outcome. Exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use story_effort::dataset::{denormalize, fit_normalizer, normalize, train_test_split, Column, Dataset, ProjectRecord};
use story_effort::linear::{fit_elastic_net, verify_kkt, DesignMatrix, ModelConfig, ModelKind};
use story_effort::metrics::{self, Scale};
use story_effort::pipeline::{fit_scenario, ScenarioSpec, Tuning, DEFAULT_SEED};
use story_effort::published;
use story_effort::report::{alpha_within_one_step, reproduce_tables, Reproduction, PUBLISHED_BEST_ALPHA};
use story_effort::selection::HyperParamGrid;

enum Outcome {
    Pass(String),
    Warn(String),
    Fail(String),
}

fn check_runtime(outcome: Outcome, elapsed: Duration, limit: Option<Duration>) -> Outcome {
    match (outcome, limit) {
        (Outcome::Pass(d), Some(l)) if elapsed > l => Outcome::Fail(format!("{d}; took {elapsed:.2?}, limit {l:?}")),
        (o, _) => o,
    }
}

// ---- criterion 1 -------------------------------------------------------

mod brute {
    pub fn mean(v: &[f64]) -> f64 {
        let mut s = 0.0;
        for x in v {
            s += x;
        }
        s / v.len() as f64
    }

    pub fn median(v: &[f64]) -> f64 {
        let mut s = v.to_vec();
        // insertion sort, deliberately naive
        for i in 1..s.len() {
            let mut j = i;
            while j > 0 && s[j - 1] > s[j] {
                s.swap(j - 1, j);
                j -= 1;
            }
        }
        let n = s.len();
        if n % 2 == 1 {
            s[n / 2]
        } else {
            (s[n / 2 - 1] + s[n / 2]) / 2.0
        }
    }

    pub fn mse(a: &[f64], e: &[f64]) -> f64 {
        mean(&a.iter().zip(e).map(|(x, y)| (x - y) * (x - y)).collect::<Vec<_>>())
    }

    pub fn mre(a: &[f64], e: &[f64]) -> Vec<f64> {
        a.iter().zip(e).map(|(x, y)| ((x - y) / x).abs()).collect()
    }

    pub fn mer(a: &[f64], e: &[f64]) -> Vec<f64> {
        a.iter().zip(e).map(|(x, y)| ((x - y) / y).abs()).collect()
    }

    pub fn pred(n: f64, mres: &[f64]) -> f64 {
        let mut hits = 0;
        for m in mres {
            if *m <= n / 100.0 {
                hits += 1;
            }
        }
        100.0 * hits as f64 / mres.len() as f64
    }

    pub fn r2(a: &[f64], e: &[f64]) -> f64 {
        let m = mean(a);
        let mut ss_res = 0.0;
        let mut ss_tot = 0.0;
        for i in 0..a.len() {
            ss_res += (a[i] - e[i]).powi(2);
            ss_tot += (a[i] - m).powi(2);
        }
        1.0 - ss_res / ss_tot
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut compared = 0;
    for _ in 0..50 {
        let n = rng.gen_range(2..40);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..120.0)).collect();
        let mut e: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..120.0)).collect();
        // make some MREs land exactly on or near the PRED thresholds
        for i in 0..n / 3 {
            e[i] = a[i] * (1.0 + rng.gen_range(-0.3..0.3));
        }
        let r = match metrics::evaluate_all(&a, &e, Scale::Original) {
            Ok(r) => r,
            Err(err) => return Outcome::Fail(format!("evaluate_all failed: {err}")),
        };
        let mres = brute::mre(&a, &e);
        let mers = brute::mer(&a, &e);
        let pairs = [
            ("mse", r.mse, brute::mse(&a, &e)),
            ("rmse", r.rmse, brute::mse(&a, &e).sqrt()),
            ("mmre", r.mmre, brute::mean(&mres)),
            ("mmer", r.mmer, brute::mean(&mers)),
            ("mdmre", r.mdmre, brute::median(&mres)),
            ("mdmer", r.mdmer, brute::median(&mers)),
            ("pred8", r.pred8, brute::pred(8.0, &mres)),
            ("pred25", r.pred25, brute::pred(25.0, &mres)),
            ("r_squared", r.r_squared, brute::r2(&a, &e)),
        ];
        for (name, got, want) in pairs {
            let d = (got - want).abs();
            if d > 1e-12 {
                return Outcome::Fail(format!("{name}: {got} vs oracle {want} (|d| = {d:e})"));
            }
            worst = worst.max(d);
            compared += 1;
        }
    }
    Outcome::Pass(format!(
        "{compared} metric values on 50 random pairs, max |diff| {worst:e}"
    ))
}

// ---- criterion 2 -------------------------------------------------------

fn ols(x1: &[f64], x2: &[f64], y: &[f64]) -> [f64; 3] {
    // full 3x3 normal equations with an intercept column, solved by Cramer's rule
    let n = y.len();
    let cols = [vec![1.0; n], x1.to_vec(), x2.to_vec()];
    let mut g = [[0.0; 3]; 3];
    let mut h = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..n).map(|r| cols[i][r] * cols[j][r]).sum();
        }
        h[i] = (0..n).map(|r| cols[i][r] * y[r]).sum();
    }
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(&g);
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut m = g;
        for i in 0..3 {
            m[i][k] = h[i];
        }
        out[k] = det3(&m) / d;
    }
    out
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_ols = 0.0f64;
    let mut worst_1d = 0.0f64;
    let mut kkt_checked = 0;

    for _ in 0..100 {
        let x1: Vec<f64> = (0..10).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let x2: Vec<f64> = (0..10).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..10)
            .map(|i| rng.gen_range(-1.0..1.0) + 0.5 * x1[i] - 1.2 * x2[i])
            .collect();
        let [b, w1, w2] = ols(&x1, &x2, &y);
        let d = DesignMatrix::from_columns(vec![x1, x2], y).unwrap();
        let cfg = ModelConfig::new(0.0, 1.0, 1_000_000).with_tol(1e-13);
        let c = fit_elastic_net(&d, &cfg).unwrap();
        let diff = (c.weights[0] - w1)
            .abs()
            .max((c.weights[1] - w2).abs())
            .max((c.intercept - b).abs());
        if diff > 1e-6 {
            return Outcome::Fail(format!("OLS mismatch {diff:e}"));
        }
        worst_ols = worst_ols.max(diff);
        if c.converged {
            let k = verify_kkt(&c, &d, &cfg, 1e-6);
            if !k.passed {
                return Outcome::Fail(format!("KKT failed at alpha 0: {k:?}"));
            }
            kkt_checked += 1;
        }
    }

    for _ in 0..100 {
        let n = rng.gen_range(5..30);
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let m = raw.iter().sum::<f64>() / n as f64;
        let sd = (raw.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n as f64).sqrt();
        let x: Vec<f64> = raw.iter().map(|v| (v - m) / sd).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 0.8 * v + rng.gen_range(-1.0..1.0)).collect();
        let alpha = rng.gen_range(0.0..1.0);
        let l1 = rng.gen_range(0.0..=1.0);
        let nf = n as f64;
        let xty = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / nf;
        let xtx = x.iter().map(|a| a * a).sum::<f64>() / nf;
        let st = xty.signum() * (xty.abs() - alpha * l1).max(0.0);
        let want = st / (xtx + alpha * (1.0 - l1));
        let d = DesignMatrix::from_columns(vec![x], y).unwrap();
        let cfg = ModelConfig::new(alpha, l1, 1000).with_tol(1e-14);
        let c = fit_elastic_net(&d, &cfg).unwrap();
        let diff = (c.weights[0] - want).abs();
        if diff > 1e-8 {
            return Outcome::Fail(format!("closed-form mismatch {diff:e} (alpha {alpha}, l1 {l1})"));
        }
        worst_1d = worst_1d.max(diff);
        if c.converged {
            let k = verify_kkt(&c, &d, &cfg, 1e-6);
            if !k.passed {
                return Outcome::Fail(format!("KKT failed on 1-D fit: {k:?}"));
            }
            kkt_checked += 1;
        }
    }

    for _ in 0..100 {
        let n = rng.gen_range(5..25);
        let x1: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let x2: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let cfg = ModelConfig::new(rng.gen_range(0.0..0.3), rng.gen_range(0.0..=1.0), 1_000_000).with_tol(1e-13);
        let d = DesignMatrix::from_columns(vec![x1, x2], y).unwrap();
        let c = fit_elastic_net(&d, &cfg).unwrap();
        if c.converged {
            let k = verify_kkt(&c, &d, &cfg, 1e-6);
            if !k.passed {
                return Outcome::Fail(format!("KKT failed: {k:?}"));
            }
            kkt_checked += 1;
        }
    }

    Outcome::Pass(format!(
        "OLS max |diff| {worst_ols:e}; closed-form max |diff| {worst_1d:e}; {kkt_checked} converged fits pass KKT"
    ))
}

// ---- criteria 3 and 4 --------------------------------------------------

fn headline() -> Reproduction {
    reproduce_tables(&Dataset::bundled(), &[])
}

fn criterion_3(repro: &Reproduction) -> Outcome {
    let find = |kind: ModelKind, tuning: Tuning| {
        repro
            .scenarios
            .iter()
            .find(|s| s.model_kind == kind && s.tuning == tuning)
    };
    let (Some(default), Some(tuned)) = (
        find(ModelKind::Lasso, Tuning::Default),
        find(ModelKind::Lasso, Tuning::GridSearch),
    ) else {
        return Outcome::Fail("LASSO scenarios missing from report".into());
    };
    let (Some(d), Some(t)) = (&default.normalized, &tuned.normalized) else {
        return Outcome::Fail(format!("metrics unavailable: {:?} {:?}", default.errors, tuned.errors));
    };
    let ratio = d.mmre / t.mmre;
    let detail = format!(
        "seed {}: tuned LASSO PRED(25) {:.2} (need 100), MMRE {:.4} (need <= 0.10); default MMRE {:.4}, ratio {:.2} (need >= 5)",
        repro.settings.split_seed, t.pred25, t.mmre, d.mmre, ratio
    );
    if t.pred25 == 100.0 && t.mmre <= 0.10 && ratio >= 5.0 {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_4() -> Outcome {
    let data = Dataset::bundled();
    let spec = ScenarioSpec::new(ModelKind::Lasso, Tuning::GridSearch).with_seed(DEFAULT_SEED);
    let fit = match fit_scenario(&data, &spec) {
        Ok(f) => f,
        Err(e) => return Outcome::Fail(format!("tuning failed: {e}")),
    };
    let alphas = HyperParamGrid::default().alphas;
    let chosen = fit.chosen_config.alpha;
    let detail = format!("seed {DEFAULT_SEED}: chosen alpha {chosen}, target {PUBLISHED_BEST_ALPHA}");
    if alpha_within_one_step(&alphas, chosen, PUBLISHED_BEST_ALPHA) {
        Outcome::Pass(detail)
    } else {
        Outcome::Warn(detail)
    }
}

// ---- criterion 5 -------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(2..60);
        let recs: Vec<ProjectRecord> = (0..n)
            .map(|i| {
                ProjectRecord::new(
                    format!("r{i}"),
                    rng.gen_range(1.0..600.0),
                    rng.gen_range(0.5..8.0),
                    rng.gen_range(1.0..300.0),
                )
            })
            .collect();
        let data = Dataset::new(recs, "random").unwrap();
        let params = fit_normalizer(&data).unwrap();
        let normed = normalize(&data, &params);
        for c in Column::ALL {
            let back = denormalize(&normed.column(c), c, &params);
            for (a, b) in back.iter().zip(data.column(c)) {
                if (a - b).abs() > 1e-12 * b.abs().max(1.0) {
                    return Outcome::Fail(format!("round trip {a} vs {b}"));
                }
            }
        }
        let frac = rng.gen_range(0.05..0.95);
        let seed: u64 = rng.gen();
        let (train, test) = train_test_split(&data, frac, seed).unwrap();
        let mut ids: Vec<&str> = train
            .records
            .iter()
            .chain(&test.records)
            .map(|r| r.project_id.as_str())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != n || train.len() + test.len() != n || test.is_empty() || train.is_empty() {
            return Outcome::Fail(format!("split of {n} is not a partition"));
        }
        if train_test_split(&data, frac, seed).unwrap() != (train, test) {
            return Outcome::Fail("split not deterministic".into());
        }
        checked += 1;
    }
    Outcome::Pass(format!("{checked} random datasets: round trip, partition, determinism"))
}

// ---- criterion 6 -------------------------------------------------------

fn criterion_6(repro: &Reproduction) -> Outcome {
    if !published::checksum_ok() {
        return Outcome::Fail(format!(
            "constants checksum {} != {}",
            published::sha256_hex(published::PUBLISHED_CSV.as_bytes()),
            published::PUBLISHED_SHA256
        ));
    }
    let md = repro.to_markdown();
    let row = "| Zia et al. [16] | NA | 0.0719 | NA | 0.0714 | NA | NA | 57.14 |";
    if md.lines().any(|l| l == row) {
        Outcome::Pass("checksum matches; Zia et al. row rendered byte-exact".into())
    } else {
        Outcome::Fail("Zia et al. row missing from rendered report".into())
    }
}

// ---- criterion 7 -------------------------------------------------------

fn criterion_7() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_spe"))
            .args(["reproduce", "--format", "json"])
            .env_remove("SPE_SEED")
            .output()
    };
    let (a, b) = match (run(), run()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Fail(format!("could not run spe: {e}")),
    };
    if !a.status.success() || !b.status.success() {
        return Outcome::Fail(format!(
            "reproduce exited {:?} / {:?}",
            a.status.code(),
            b.status.code()
        ));
    }
    if serde_json::from_slice::<serde_json::Value>(&a.stdout).is_err() {
        return Outcome::Fail("output is not JSON".into());
    }
    if a.stdout == b.stdout {
        Outcome::Pass(format!("two runs, {} identical bytes", a.stdout.len()))
    } else {
        Outcome::Fail("JSON reports differ between runs".into())
    }
}

fn main() {
    let secs = Duration::from_secs;
    let mut failed = 0;
    let mut report = |id: &str, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = check_runtime(f(), start.elapsed(), limit);
        let elapsed = start.elapsed();
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Warn(d) => ("WARN", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {id} {name} ({elapsed:.2?}): {detail}");
    };

    report("C1", "metric oracle equivalence", Some(secs(1)), &mut criterion_1);
    report("C2", "solver correctness", Some(secs(5)), &mut criterion_2);
    let mut repro = None;
    report("C3", "table 2 direction reproduction", Some(secs(10)), &mut || {
        let r = headline();
        let o = criterion_3(&r);
        repro = Some(r);
        o
    });
    report("C4", "best alpha recovery", None, &mut criterion_4);
    report(
        "C5",
        "normalization and split properties",
        Some(secs(1)),
        &mut criterion_5,
    );
    let repro = repro.unwrap_or_else(headline);
    report("C6", "published constants integrity", None, &mut || criterion_6(&repro));
    report("C7", "end-to-end determinism", None, &mut criterion_7);

    if failed > 0 {
        println!("{failed} of 7 criteria failed");
        std::process::exit(1);
    }
}
