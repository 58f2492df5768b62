//! Default-vs-tuned comparison report, with published figures side by side.
//!
//! [`reproduce_tables`] runs the four Elastic Net / LASSO × default / tuned
//! scenarios on a headline split seed, repeats them over a list of seeds for
//! a sensitivity appendix, and collects everything into a [`Reproduction`]
//! that renders as Markdown, CSV or JSON. Rendering is deterministic: no
//! timestamps, no hash-ordered maps.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::linear::{ModelConfig, ModelKind};
use crate::metrics::{median, EvaluationReport, Scale};
use crate::pipeline::{fit_scenario, table2_scenarios, NormalizeOn, ScenarioSpec, Tuning};
use crate::published::{self, table_columns, Metric, PublishedRow};
use crate::selection::HyperParamGrid;

/// Tuned LASSO must reach this PRED(25) on the headline split.
pub const TUNED_PRED25_TARGET: f64 = 100.0;
/// Tuned LASSO MMRE ceiling on the headline split.
pub const TUNED_MMRE_MAX: f64 = 0.10;
/// Default-parameter MMRE must be at least this multiple of the tuned MMRE.
pub const DEFAULT_OVER_TUNED_MIN_RATIO: f64 = 5.0;
/// Best alpha reported for both tuned models.
pub const PUBLISHED_BEST_ALPHA: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Md,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected md, csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// One scenario on one split seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub label: String,
    pub model_kind: ModelKind,
    pub tuning: Tuning,
    pub split_seed: u64,
    pub test_ids: Vec<String>,
    pub chosen_config: Option<ModelConfig>,
    pub weights: Vec<f64>,
    pub intercept: Option<f64>,
    pub converged: Option<bool>,
    pub n_sweeps_used: Option<usize>,
    pub normalized: Option<EvaluationReport>,
    pub original: Option<EvaluationReport>,
    pub errors: Vec<String>,
}

impl ScenarioRow {
    pub fn report(&self, scale: Scale) -> Option<&EvaluationReport> {
        match scale {
            Scale::Normalized => self.normalized.as_ref(),
            Scale::Original => self.original.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub dataset_source: String,
    pub n_records: usize,
    pub split_seed: u64,
    pub test_fraction: f64,
    pub test_size: Option<usize>,
    pub k_folds: usize,
    pub normalize_on: NormalizeOn,
    pub metric_scale: Scale,
    pub grid: HyperParamGrid,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub label: String,
    pub scale: Scale,
    pub runs: usize,
    pub failures: usize,
    pub mmre_min: Option<f64>,
    pub mmre_median: Option<f64>,
    pub mmre_max: Option<f64>,
    pub pred25_min: Option<f64>,
    pub pred25_max: Option<f64>,
}

/// Full comparison report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub settings: Settings,
    /// The four scenarios on the headline seed, in published table order.
    pub scenarios: Vec<ScenarioRow>,
    /// Transcribed figures, never recomputed.
    pub published: Vec<PublishedRow>,
    pub published_sha256: String,
    /// The four scenarios repeated for every seed in `settings.seeds`.
    pub seed_runs: Vec<ScenarioRow>,
    pub seed_summary: Vec<SeedSummary>,
    pub checks: Vec<Check>,
}

fn run_row(data: &Dataset, spec: &ScenarioSpec) -> ScenarioRow {
    let mut row = ScenarioRow {
        label: spec.label(),
        model_kind: spec.model_kind,
        tuning: spec.tuning,
        split_seed: spec.split_seed,
        test_ids: Vec::new(),
        chosen_config: None,
        weights: Vec::new(),
        intercept: None,
        converged: None,
        n_sweeps_used: None,
        normalized: None,
        original: None,
        errors: Vec::new(),
    };
    match fit_scenario(data, spec) {
        Ok(fit) => {
            row.test_ids = fit.test_ids.clone();
            row.chosen_config = Some(fit.chosen_config);
            row.weights = fit.fitted.weights.clone();
            row.intercept = Some(fit.fitted.intercept);
            row.converged = Some(fit.fitted.converged);
            row.n_sweeps_used = Some(fit.fitted.n_sweeps_used);
            for scale in [Scale::Normalized, Scale::Original] {
                match fit.evaluate(scale) {
                    Ok(r) => match scale {
                        Scale::Normalized => row.normalized = Some(r),
                        Scale::Original => row.original = Some(r),
                    },
                    Err(e) => row.errors.push(format!("evaluation ({scale} scale): {e}")),
                }
            }
        }
        Err(e) => row.errors.push(e.to_string()),
    }
    row
}

/// Runs the comparison with default settings. An empty seed list means the
/// headline seed only.
pub fn reproduce_tables(data: &Dataset, seeds: &[u64]) -> Reproduction {
    let template = ScenarioSpec::new(ModelKind::Lasso, Tuning::Default);
    reproduce_with(data, &template, seeds)
}

/// Runs the comparison using `template` for everything except the model
/// kind and tuning mode.
pub fn reproduce_with(data: &Dataset, template: &ScenarioSpec, seeds: &[u64]) -> Reproduction {
    let seeds: Vec<u64> = if seeds.is_empty() {
        vec![template.split_seed]
    } else {
        seeds.to_vec()
    };
    let scenarios: Vec<ScenarioRow> = table2_scenarios(template).iter().map(|s| run_row(data, s)).collect();

    let mut seed_runs = Vec::new();
    for &seed in &seeds {
        let t = template.clone().with_seed(seed);
        seed_runs.extend(table2_scenarios(&t).iter().map(|s| run_row(data, s)));
    }
    let seed_summary = summarize(&seed_runs, template.metric_scale);
    let checks = checks(&scenarios, template);

    Reproduction {
        settings: Settings {
            dataset_source: data.source.clone(),
            n_records: data.len(),
            split_seed: template.split_seed,
            test_fraction: template.test_fraction,
            test_size: template.test_size,
            k_folds: template.k_folds,
            normalize_on: template.normalize_on,
            metric_scale: template.metric_scale,
            grid: template.grid.clone(),
            seeds,
        },
        scenarios,
        published: published::rows(),
        published_sha256: published::sha256_hex(published::PUBLISHED_CSV.as_bytes()),
        seed_runs,
        seed_summary,
        checks,
    }
}

fn summarize(runs: &[ScenarioRow], scale: Scale) -> Vec<SeedSummary> {
    let mut labels: Vec<String> = Vec::new();
    for r in runs {
        if !labels.contains(&r.label) {
            labels.push(r.label.clone());
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let rows: Vec<&ScenarioRow> = runs.iter().filter(|r| r.label == label).collect();
            let reports: Vec<&EvaluationReport> = rows.iter().filter_map(|r| r.report(scale)).collect();
            let mmre: Vec<f64> = reports.iter().map(|r| r.mmre).collect();
            let pred25: Vec<f64> = reports.iter().map(|r| r.pred25).collect();
            let min = |v: &[f64]| v.iter().copied().reduce(f64::min);
            let max = |v: &[f64]| v.iter().copied().reduce(f64::max);
            SeedSummary {
                label,
                scale,
                runs: rows.len(),
                failures: rows.len() - reports.len(),
                mmre_min: min(&mmre),
                mmre_median: median(&mmre).ok(),
                mmre_max: max(&mmre),
                pred25_min: min(&pred25),
                pred25_max: max(&pred25),
            }
        })
        .collect()
}

fn find(rows: &[ScenarioRow], kind: ModelKind, tuning: Tuning) -> Option<&ScenarioRow> {
    rows.iter().find(|r| r.model_kind == kind && r.tuning == tuning)
}

/// Position of `alpha` in the sorted alpha axis, if present.
fn grid_position(alphas: &[f64], alpha: f64) -> Option<usize> {
    let mut sorted = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    sorted.iter().position(|&a| a == alpha)
}

/// Whether `chosen` lies within one grid step of `target` on the sorted alpha
/// axis. When `target` is not on the grid, the step is measured to the
/// nearest grid points on either side of it.
pub fn alpha_within_one_step(alphas: &[f64], chosen: f64, target: f64) -> bool {
    let mut sorted = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let Some(ci) = sorted.iter().position(|&a| a == chosen) else {
        return false;
    };
    match grid_position(&sorted, target) {
        Some(ti) => ci.abs_diff(ti) <= 1,
        None => {
            let upper = sorted.iter().position(|&a| a > target).unwrap_or(sorted.len());
            // neighbours below and above the target
            ci + 1 == upper || ci == upper
        }
    }
}

fn checks(scenarios: &[ScenarioRow], template: &ScenarioSpec) -> Vec<Check> {
    let scale = template.metric_scale;
    let tuned = find(scenarios, ModelKind::Lasso, Tuning::GridSearch);
    let default = find(scenarios, ModelKind::Lasso, Tuning::Default);
    let tuned_report = tuned.and_then(|r| r.report(scale));
    let default_report = default.and_then(|r| r.report(scale));
    let mut out = Vec::new();

    out.push(match tuned_report {
        Some(r) => Check {
            id: "tuned-lasso-accuracy".into(),
            description: format!(
                "tuned LASSO reaches PRED(25) = {TUNED_PRED25_TARGET} and MMRE <= {TUNED_MMRE_MAX} ({scale} scale)"
            ),
            status: if r.pred25 == TUNED_PRED25_TARGET && r.mmre <= TUNED_MMRE_MAX {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: format!("PRED(25) = {}, MMRE = {:.4}", r.pred25, r.mmre),
        },
        None => Check {
            id: "tuned-lasso-accuracy".into(),
            description: "tuned LASSO accuracy".into(),
            status: CheckStatus::Fail,
            detail: tuned.map(|r| r.errors.join("; ")).unwrap_or_default(),
        },
    });

    out.push(match (default_report, tuned_report) {
        (Some(d), Some(t)) => {
            let ratio = d.mmre / t.mmre;
            Check {
                id: "default-vs-tuned".into(),
                description: format!("default LASSO MMRE >= {DEFAULT_OVER_TUNED_MIN_RATIO} x tuned LASSO MMRE"),
                status: if d.mmre >= DEFAULT_OVER_TUNED_MIN_RATIO * t.mmre {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                detail: format!("default {:.4} / tuned {:.4} = {:.2}", d.mmre, t.mmre, ratio),
            }
        }
        _ => Check {
            id: "default-vs-tuned".into(),
            description: "default vs tuned LASSO MMRE".into(),
            status: CheckStatus::Fail,
            detail: "a LASSO scenario could not be evaluated".into(),
        },
    });

    let chosen = tuned.and_then(|r| r.chosen_config).map(|c| c.alpha);
    out.push(Check {
        id: "best-alpha".into(),
        description: format!("grid search picks alpha within one grid step of {PUBLISHED_BEST_ALPHA}"),
        status: match chosen {
            Some(a) if alpha_within_one_step(&template.grid.alphas, a, PUBLISHED_BEST_ALPHA) => CheckStatus::Pass,
            _ => CheckStatus::Warn,
        },
        detail: match chosen {
            Some(a) => format!("chosen alpha {a}"),
            None => "no tuned LASSO fit".into(),
        },
    });

    out.push(Check {
        id: "published-checksum".into(),
        description: "transcribed published figures match their checksum".into(),
        status: if published::checksum_ok() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail: published::sha256_hex(published::PUBLISHED_CSV.as_bytes()),
    });
    out
}

impl Reproduction {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Md => self.to_markdown(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let s = &self.settings;
        let scale = s.metric_scale;
        let mut md = String::new();
        let _ = writeln!(md, "# Story-point effort estimation: LASSO and Elastic Net\n");
        let _ = writeln!(md, "- dataset: `{}` ({} projects)", s.dataset_source, s.n_records);
        let test = match s.test_size {
            Some(n) => format!("{n} projects"),
            None => format!("fraction {}", s.test_fraction),
        };
        let _ = writeln!(
            md,
            "- split seed {}, test {}, {}-fold CV, normalization fitted on {} data",
            s.split_seed, test, s.k_folds, s.normalize_on
        );
        let _ = writeln!(
            md,
            "- grid: alphas {:?}, l1_ratios {:?}, max_iters {:?}\n",
            s.grid.alphas, s.grid.l1_ratios, s.grid.max_iters
        );

        let _ = writeln!(md, "## Default vs tuned ({scale} scale)\n");
        let cols = table_columns(2);
        header(&mut md, "Technique", cols);
        for row in &self.scenarios {
            let key = scenario_key(row);
            let published = self.published.iter().find(|p| p.key == key);
            match row.report(scale) {
                Some(r) => table_row(
                    &mut md,
                    &format!("{} (this run)", row.label),
                    cols.iter().map(|&m| fmt_metric(m, r)),
                ),
                None => table_row(
                    &mut md,
                    &format!("{} (this run)", row.label),
                    cols.iter().map(|_| "error".to_string()),
                ),
            }
            if let Some(p) = published {
                table_row(
                    &mut md,
                    &format!("{} (published)", row.label),
                    cols.iter().map(|&m| p.cell(m).to_string()),
                );
                if let Some(r) = row.report(scale) {
                    table_row(
                        &mut md,
                        &format!("{} (delta)", row.label),
                        cols.iter().map(|&m| match p.value(m) {
                            Some(v) => fmt_delta(m, metric_value(m, r) - v),
                            None => "-".into(),
                        }),
                    );
                }
            }
        }
        md.push('\n');

        let other = match scale {
            Scale::Normalized => Scale::Original,
            Scale::Original => Scale::Normalized,
        };
        let _ = writeln!(md, "## All metrics, both scales\n");
        let all = [
            Metric::Mse,
            Metric::Rmse,
            Metric::Mmre,
            Metric::Mmer,
            Metric::Mdmre,
            Metric::Mdmer,
            Metric::Pred8,
            Metric::Pred25,
            Metric::RSquared,
        ];
        header(&mut md, "Scenario / scale", &all);
        for row in &self.scenarios {
            for sc in [scale, other] {
                let name = format!("{} / {sc}", row.label);
                match row.report(sc) {
                    Some(r) => table_row(&mut md, &name, all.iter().map(|&m| fmt_metric(m, r))),
                    None => table_row(&mut md, &name, all.iter().map(|_| "error".to_string())),
                }
            }
        }
        md.push('\n');

        let _ = writeln!(md, "## Chosen hyperparameters\n");
        let _ = writeln!(
            md,
            "| Scenario | alpha | l1_ratio | max_iter | converged | sweeps | weights | intercept |"
        );
        let _ = writeln!(md, "|---|---|---|---|---|---|---|---|");
        for row in &self.scenarios {
            match (row.chosen_config, row.intercept) {
                (Some(c), Some(b)) => {
                    let w: Vec<String> = row.weights.iter().map(|w| format!("{w:.4}")).collect();
                    let _ = writeln!(
                        md,
                        "| {} | {} | {} | {} | {} | {} | [{}] | {:.4} |",
                        row.label,
                        c.alpha,
                        c.l1_ratio,
                        c.max_iter,
                        row.converged.unwrap_or(false),
                        row.n_sweeps_used.unwrap_or(0),
                        w.join(", "),
                        b
                    );
                }
                _ => {
                    let _ = writeln!(md, "| {} | - | - | - | - | - | - | - |", row.label);
                }
            }
        }
        let _ = writeln!(
            md,
            "\nPublished best values: alpha 0.001, l1_ratio 0.001, max_iter 25, random_state 120.\n"
        );

        for &(table, title) in &[
            (3u8, "MMRE and PRED(25)"),
            (4u8, "PRED(25), R^2, MSE, RMSE"),
            (5u8, "Full error battery"),
        ] {
            let _ = writeln!(md, "## Comparison with published results: {title}\n");
            let _ = writeln!(
                md,
                "Rows other than \"this run\" are transcribed figures, not recomputed.\n"
            );
            let cols = table_columns(table);
            header(&mut md, "Reference", cols);
            for p in self.published.iter().filter(|p| p.table == table) {
                table_row(&mut md, &p.reference, cols.iter().map(|&m| p.cell(m).to_string()));
            }
            if let Some(r) = find(&self.scenarios, ModelKind::Lasso, Tuning::GridSearch).and_then(|r| r.report(scale)) {
                table_row(
                    &mut md,
                    "LASSO with Tuning (this run)",
                    cols.iter().map(|&m| fmt_metric(m, r)),
                );
            }
            md.push('\n');
        }

        let _ = writeln!(md, "## Seed sensitivity ({scale} scale)\n");
        let _ = writeln!(md, "Seeds: {:?}\n", s.seeds);
        let _ = writeln!(
            md,
            "| Scenario | runs | failed | MMRE min | MMRE median | MMRE max | PRED(25) min | PRED(25) max |"
        );
        let _ = writeln!(md, "|---|---|---|---|---|---|---|---|");
        for sm in &self.seed_summary {
            let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
            let p = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.2}"));
            let _ = writeln!(
                md,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                sm.label,
                sm.runs,
                sm.failures,
                f(sm.mmre_min),
                f(sm.mmre_median),
                f(sm.mmre_max),
                p(sm.pred25_min),
                p(sm.pred25_max)
            );
        }
        md.push('\n');
        let _ = writeln!(md, "| Seed | Scenario | alpha | MMRE | PRED(25) | MSE | note |");
        let _ = writeln!(md, "|---|---|---|---|---|---|---|");
        for row in &self.seed_runs {
            let alpha = row.chosen_config.map_or("-".into(), |c| c.alpha.to_string());
            match row.report(scale) {
                Some(r) => {
                    let _ = writeln!(
                        md,
                        "| {} | {} | {} | {:.4} | {:.2} | {:.4} | |",
                        row.split_seed, row.label, alpha, r.mmre, r.pred25, r.mse
                    );
                }
                None => {
                    let _ = writeln!(
                        md,
                        "| {} | {} | {} | - | - | - | {} |",
                        row.split_seed,
                        row.label,
                        alpha,
                        row.errors.join("; ")
                    );
                }
            }
        }
        md.push('\n');

        let _ = writeln!(md, "## Checks\n");
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Warn => "WARN",
                CheckStatus::Fail => "FAIL",
            };
            let _ = writeln!(md, "- [{tag}] {}: {} ({})", c.id, c.description, c.detail);
        }
        md
    }

    /// Long-format CSV: one line per scenario and scale, per transcribed
    /// row, per seed run and per check.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let cols = [
            Metric::Mse,
            Metric::Rmse,
            Metric::Mmre,
            Metric::Mmer,
            Metric::Mdmre,
            Metric::Mdmer,
            Metric::Pred8,
            Metric::Pred25,
            Metric::RSquared,
        ];
        let mut head = vec!["section".to_string(), "label".into(), "seed".into(), "scale".into()];
        head.extend(
            [
                "mse",
                "rmse",
                "mmre",
                "mmer",
                "mdmre",
                "mdmer",
                "pred8",
                "pred25",
                "r_squared",
            ]
            .iter()
            .map(|s| s.to_string()),
        );
        head.push("detail".into());
        w.write_record(&head).expect("in-memory write");

        let mut scenario_lines = |section: &str, rows: &[ScenarioRow]| {
            for row in rows {
                for scale in [Scale::Normalized, Scale::Original] {
                    let mut rec = vec![
                        section.to_string(),
                        row.label.clone(),
                        row.split_seed.to_string(),
                        scale.to_string(),
                    ];
                    match row.report(scale) {
                        Some(r) => {
                            rec.extend(cols.iter().map(|&m| metric_value(m, r).to_string()));
                            rec.push(String::new());
                        }
                        None => {
                            rec.extend(cols.iter().map(|_| String::new()));
                            rec.push(row.errors.join("; "));
                        }
                    }
                    w.write_record(&rec).expect("in-memory write");
                }
            }
        };
        scenario_lines("scenario", &self.scenarios);
        scenario_lines("seed", &self.seed_runs);

        for p in &self.published {
            let mut rec = vec![
                format!("published_table{}", p.table),
                p.reference.clone(),
                String::new(),
                String::new(),
            ];
            rec.extend(cols.iter().map(|&m| p.cell(m).to_string()));
            rec.push(p.key.clone());
            w.write_record(&rec).expect("in-memory write");
        }
        for c in &self.checks {
            let mut rec = vec!["check".to_string(), c.id.clone(), String::new(), String::new()];
            rec.extend(cols.iter().map(|_| String::new()));
            rec.push(format!("{:?}: {}", c.status, c.detail).to_lowercase());
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn scenario_key(row: &ScenarioRow) -> &'static str {
    match (row.model_kind, row.tuning) {
        (ModelKind::ElasticNet, Tuning::Default) => "table2-enet-default",
        (ModelKind::Lasso, Tuning::Default) => "table2-lasso-default",
        (ModelKind::ElasticNet, Tuning::GridSearch) => "table2-enet-tuned",
        (ModelKind::Lasso, Tuning::GridSearch) => "table2-lasso-tuned",
    }
}

fn metric_value(m: Metric, r: &EvaluationReport) -> f64 {
    match m {
        Metric::Mse => r.mse,
        Metric::Mmre => r.mmre,
        Metric::Mmer => r.mmer,
        Metric::Mdmre => r.mdmre,
        Metric::Mdmer => r.mdmer,
        Metric::Pred8 => r.pred8,
        Metric::Pred25 => r.pred25,
        Metric::RSquared => r.r_squared,
        Metric::Rmse => r.rmse,
    }
}

fn fmt_metric(m: Metric, r: &EvaluationReport) -> String {
    match m {
        Metric::Pred8 | Metric::Pred25 => format!("{:.2}", metric_value(m, r)),
        _ => format!("{:.4}", metric_value(m, r)),
    }
}

fn fmt_delta(m: Metric, d: f64) -> String {
    match m {
        Metric::Pred8 | Metric::Pred25 => format!("{d:+.2}"),
        _ => format!("{d:+.4}"),
    }
}

fn header(md: &mut String, first: &str, cols: &[Metric]) {
    let names: Vec<&str> = cols.iter().map(|m| m.heading()).collect();
    let _ = writeln!(md, "| {} | {} |", first, names.join(" | "));
    let _ = writeln!(md, "|---|{}", "---|".repeat(cols.len()));
}

fn table_row(md: &mut String, label: &str, cells: impl Iterator<Item = String>) {
    let cells: Vec<String> = cells.collect();
    let _ = writeln!(md, "| {} | {} |", label, cells.join(" | "));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_step_rule() {
        let g = HyperParamGrid::default().alphas;
        assert!(alpha_within_one_step(&g, 0.001, 0.001));
        assert!(alpha_within_one_step(&g, 0.0001, 0.001));
        assert!(alpha_within_one_step(&g, 0.01, 0.001));
        assert!(!alpha_within_one_step(&g, 0.1, 0.001));
        assert!(!alpha_within_one_step(&g, 0.5, 0.001));
        // off-grid target between 0.001 and 0.01
        assert!(alpha_within_one_step(&g, 0.001, 0.005));
        assert!(alpha_within_one_step(&g, 0.01, 0.005));
        assert!(!alpha_within_one_step(&g, 0.1, 0.005));
    }

    #[test]
    fn empty_seed_list_uses_headline_seed() {
        let r = reproduce_tables(&Dataset::bundled(), &[]);
        assert_eq!(r.settings.seeds, vec![120]);
        assert_eq!(r.scenarios.len(), 4);
        assert_eq!(r.seed_runs.len(), 4);
        let labels: Vec<&str> = r.scenarios.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "Elastic Net with default parameters",
                "LASSO with default parameters",
                "Elastic Net with Tuning",
                "LASSO with Tuning"
            ]
        );
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
