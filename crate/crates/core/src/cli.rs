//! `spe` command-line front end.
//!
//! Exit codes: 0 success, 1 data or validation failure, 2 usage error,
//! 3 failed reproduction check under `--strict`.
//!
//! Settings resolve in this order: command-line flag, then the TOML file
//! given by `--config`, then `SPE_SEED` (seed only), then built-in defaults.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::dataset::{diagnose_file, load_dataset, Dataset, DatasetError};
use crate::linear::ModelKind;
use crate::metrics::Scale;
use crate::pipeline::{
    fit_scenario, NormalizeOn, PipelineError, SavedModel, ScenarioSpec, Tuning, DEFAULT_K_FOLDS, DEFAULT_SEED,
    DEFAULT_TEST_FRACTION,
};
use crate::report::{reproduce_with, Format};
use crate::selection::HyperParamGrid;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STRICT: i32 = 3;

pub const SEED_ENV: &str = "SPE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "spe",
    version,
    about = "Story-point effort estimation with LASSO and Elastic Net"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a dataset CSV and report every bad row
    Validate {
        /// CSV with header project_id,story_points,velocity,actual_effort
        path: PathBuf,
    },
    /// Train one scenario, evaluate it on the held-out split and save the model
    Fit(FitArgs),
    /// Run all four default/tuned scenarios and render the comparison report
    Reproduce(ReproduceArgs),
    /// Apply a saved model to a new project
    Estimate(EstimateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Lasso,
    #[value(alias = "elastic_net", alias = "enet")]
    ElasticNet,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Lasso => ModelKind::Lasso,
            ModelArg::ElasticNet => ModelKind::ElasticNet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TuneArg {
    Default,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleArg {
    Normalized,
    Original,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeOnArg {
    Full,
    Train,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormatArg {
    Md,
    Csv,
    Json,
}

/// Options shared by `fit` and `reproduce`.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Dataset CSV (defaults to the bundled 21-project table)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// TOML file with defaults for any of these options
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Split and fold seed [default: 120]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Share of projects held out for testing [default: 0.2]
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Exact number of held-out projects; overrides --test-fraction
    #[arg(long)]
    pub test_size: Option<usize>,
    /// Cross-validation folds [default: 5]
    #[arg(long)]
    pub k_folds: Option<usize>,
    /// Scale the metrics are computed on [default: normalized]
    #[arg(long, value_enum)]
    pub scale: Option<ScaleArg>,
    /// Rows the min-max scaling is fitted on [default: full]
    #[arg(long, value_enum)]
    pub normalize_on: Option<NormalizeOnArg>,
    /// Comma-separated alpha grid
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Comma-separated l1_ratio grid
    #[arg(long, value_delimiter = ',')]
    pub l1_ratios: Option<Vec<f64>>,
    /// Comma-separated max_iter grid
    #[arg(long, value_delimiter = ',')]
    pub max_iters: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "lasso")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "default")]
    pub tune: TuneArg,
    /// Where to write the model JSON
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// Also write every grid candidate's CV scores to this CSV
    #[arg(long)]
    pub scores_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Seeds for the sensitivity appendix: `a..b` (inclusive) or `a,b,c`
    #[arg(long, default_value = "1..10")]
    pub seeds: String,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with code 3 if any reproduction check fails
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Model JSON written by `fit`
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub story_points: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub velocity: f64,
}

/// Optional settings file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dataset: Option<PathBuf>,
    pub seed: Option<u64>,
    pub test_fraction: Option<f64>,
    pub test_size: Option<usize>,
    pub k_folds: Option<usize>,
    pub format: Option<FormatArg>,
    pub scale: Option<ScaleArg>,
    pub normalize_on: Option<NormalizeOnArg>,
    pub alphas: Option<Vec<f64>>,
    pub l1_ratios: Option<Vec<f64>>,
    pub max_iters: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub dataset_path: Option<PathBuf>,
    pub seed: u64,
    pub test_fraction: f64,
    pub test_size: Option<usize>,
    pub k_folds: usize,
    pub grid: HyperParamGrid,
    pub format: Format,
    pub scale: Scale,
    pub normalize_on: NormalizeOn,
}

impl CliConfig {
    /// Merges flags over the config file over `SPE_SEED` over defaults.
    pub fn resolve(args: &CommonArgs, format: Option<FormatArg>, env_seed: Option<&str>) -> Result<Self, String> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let env_seed = match env_seed {
            Some(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got `{s}`"))?,
            ),
            None => None,
        };
        let defaults = HyperParamGrid::default();
        let grid = HyperParamGrid {
            alphas: args.alphas.clone().or(file.alphas).unwrap_or(defaults.alphas),
            l1_ratios: args.l1_ratios.clone().or(file.l1_ratios).unwrap_or(defaults.l1_ratios),
            max_iters: args.max_iters.clone().or(file.max_iters).unwrap_or(defaults.max_iters),
        };
        if grid.alphas.is_empty() || grid.l1_ratios.is_empty() || grid.max_iters.is_empty() {
            return Err("grid lists must not be empty".into());
        }
        let test_fraction = args
            .test_fraction
            .or(file.test_fraction)
            .unwrap_or(DEFAULT_TEST_FRACTION);
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(format!(
                "--test-fraction must lie strictly between 0 and 1, got {test_fraction}"
            ));
        }
        let k_folds = args.k_folds.or(file.k_folds).unwrap_or(DEFAULT_K_FOLDS);
        if k_folds < 2 {
            return Err(format!("--k-folds must be at least 2, got {k_folds}"));
        }
        Ok(CliConfig {
            dataset_path: args.data.clone().or(file.dataset),
            seed: args.seed.or(file.seed).or(env_seed).unwrap_or(DEFAULT_SEED),
            test_fraction,
            test_size: args.test_size.or(file.test_size),
            k_folds,
            grid,
            format: match format.or(file.format).unwrap_or(FormatArg::Md) {
                FormatArg::Md => Format::Md,
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            },
            scale: match args.scale.or(file.scale).unwrap_or(ScaleArg::Normalized) {
                ScaleArg::Normalized => Scale::Normalized,
                ScaleArg::Original => Scale::Original,
            },
            normalize_on: match args.normalize_on.or(file.normalize_on).unwrap_or(NormalizeOnArg::Full) {
                NormalizeOnArg::Full => NormalizeOn::Full,
                NormalizeOnArg::Train => NormalizeOn::Train,
            },
        })
    }

    pub fn scenario(&self, model_kind: ModelKind, tuning: Tuning) -> ScenarioSpec {
        ScenarioSpec {
            model_kind,
            tuning,
            split_seed: self.seed,
            test_fraction: self.test_fraction,
            test_size: self.test_size,
            k_folds: self.k_folds,
            grid: self.grid.clone(),
            metric_scale: self.scale,
            normalize_on: self.normalize_on,
        }
    }

    pub fn load_data(&self) -> Result<Dataset, DatasetError> {
        match &self.dataset_path {
            Some(p) => load_dataset(p),
            None => Ok(Dataset::bundled()),
        }
    }
}

/// Parses `a..b` (inclusive), `a..=b`, or a comma list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || format!("invalid seed list `{s}`");
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    match cli.command {
        Command::Validate { path } => cmd_validate(&path, out, err),
        Command::Fit(a) => cmd_fit(&a, env_seed.as_deref(), out, err),
        Command::Reproduce(a) => cmd_reproduce(&a, env_seed.as_deref(), out, err),
        Command::Estimate(a) => cmd_estimate(&a, out, err),
    }
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let diagnosis = match diagnose_file(path) {
        Ok(d) => d,
        Err(e @ DatasetError::NotFound(_)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DATA;
        }
    };
    for p in &diagnosis.problems {
        let _ = writeln!(err, "error: {p}");
    }
    if diagnosis.is_clean() {
        let _ = writeln!(out, "{}: {} records", path.display(), diagnosis.records.len());
        EXIT_OK
    } else {
        let _ = writeln!(
            err,
            "{}: {} valid records, {} problem(s)",
            path.display(),
            diagnosis.records.len(),
            diagnosis.problems.len()
        );
        EXIT_DATA
    }
}

fn data_exit(e: &DatasetError) -> i32 {
    match e {
        DatasetError::NotFound(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

pub fn cmd_fit(args: &FitArgs, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match CliConfig::resolve(&args.common, None, env_seed) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let data = match cfg.load_data() {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return data_exit(&e);
        }
    };
    let tuning = match args.tune {
        TuneArg::Default => Tuning::Default,
        TuneArg::Grid => Tuning::GridSearch,
    };
    let spec = cfg.scenario(args.model.into(), tuning);
    let fit = match fit_scenario(&data, &spec) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DATA;
        }
    };
    if let Err(e) = fit.saved_model().save(&args.out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_DATA;
    }
    if let (Some(path), Some(grid)) = (&args.scores_out, &fit.grid_result) {
        if let Err(e) = std::fs::write(path, grid.scores_csv()) {
            let _ = writeln!(err, "error: writing {}: {e}", path.display());
            return EXIT_DATA;
        }
    }

    let c = &fit.chosen_config;
    let _ = writeln!(out, "scenario: {}", spec.label());
    let _ = writeln!(out, "dataset: {} ({} projects)", data.source, data.len());
    let _ = writeln!(out, "test projects: {}", fit.test_ids.join(", "));
    let _ = writeln!(out, "alpha: {}", c.alpha);
    let _ = writeln!(out, "l1_ratio: {}", c.l1_ratio);
    let _ = writeln!(out, "max_iter: {}", c.max_iter);
    if let Some(g) = &fit.grid_result {
        let _ = writeln!(
            out,
            "cv mse: {:.6} ({} candidates)",
            g.best_cv_score,
            g.all_scores.len()
        );
    }
    let _ = writeln!(
        out,
        "weights: [{}]  intercept: {:.6}  converged: {} after {} sweeps",
        fit.fitted
            .weights
            .iter()
            .map(|w| format!("{w:.6}"))
            .collect::<Vec<_>>()
            .join(", "),
        fit.fitted.intercept,
        fit.fitted.converged,
        fit.fitted.n_sweeps_used
    );
    match fit.evaluate(spec.metric_scale) {
        Ok(r) => {
            let _ = writeln!(out, "test metrics ({} scale, n = {}):", r.scale, r.n);
            let _ = writeln!(out, "  MSE {:.4}  RMSE {:.4}  R^2 {:.4}", r.mse, r.rmse, r.r_squared);
            let _ = writeln!(
                out,
                "  MMRE {:.4}  MMER {:.4}  MdMRE {:.4}  MdMER {:.4}",
                r.mmre, r.mmer, r.mdmre, r.mdmer
            );
            let _ = writeln!(out, "  PRED(8) {:.2}  PRED(25) {:.2}", r.pred8, r.pred25);
        }
        // the model is still valid; only the held-out scoring is undefined
        Err(e) => {
            let _ = writeln!(out, "test metrics ({} scale): unavailable", spec.metric_scale);
            let _ = writeln!(err, "warning: {e}");
        }
    }
    let _ = writeln!(out, "model written to {}", args.out.display());
    EXIT_OK
}

pub fn cmd_reproduce(args: &ReproduceArgs, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match CliConfig::resolve(&args.common, args.format, env_seed) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let seeds = match parse_seeds(&args.seeds) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let data = match cfg.load_data() {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return data_exit(&e);
        }
    };
    let template = cfg.scenario(ModelKind::Lasso, Tuning::Default);
    let repro = reproduce_with(&data, &template, &seeds);
    let text = repro.render(cfg.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                let _ = writeln!(err, "error: writing {}: {e}", path.display());
                return EXIT_DATA;
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    for c in &repro.checks {
        let _ = writeln!(err, "{:?}: {} ({})", c.status, c.id, c.detail);
    }
    if args.strict && repro.any_failed() {
        EXIT_STRICT
    } else {
        EXIT_OK
    }
}

pub fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    for (name, v) in [("story-points", args.story_points), ("velocity", args.velocity)] {
        if !(v > 0.0) || !v.is_finite() {
            let _ = writeln!(err, "error: --{name} must be a positive number, got {v}");
            return EXIT_USAGE;
        }
    }
    let model = match SavedModel::load(&args.model) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DATA;
        }
    };
    match model.estimate(args.story_points, args.velocity) {
        Ok(effort) => {
            let _ = writeln!(out, "{effort:.4}");
            EXIT_OK
        }
        Err(e @ PipelineError::InvalidInput(_)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1..10").unwrap(), (1..=10).collect::<Vec<_>>());
        assert_eq!(parse_seeds("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(parse_seeds("7, 9,120").unwrap(), vec![7, 9, 120]);
        assert_eq!(parse_seeds("").unwrap(), Vec::<u64>::new());
        assert!(parse_seeds("5..1").is_err());
        assert!(parse_seeds("a,b").is_err());
    }

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "seed = 7\nk_folds = 3\nalphas = [0.5]\nformat = \"json\"\n").unwrap();
        let mut args = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        let c = CliConfig::resolve(&args, None, Some("99")).unwrap();
        assert_eq!((c.seed, c.k_folds, c.format), (7, 3, Format::Json));
        assert_eq!(c.grid.alphas, vec![0.5]);
        assert_eq!(c.grid.max_iters, HyperParamGrid::default().max_iters);

        args.seed = Some(11);
        assert_eq!(CliConfig::resolve(&args, Some(FormatArg::Csv), None).unwrap().seed, 11);
        assert_eq!(
            CliConfig::resolve(&args, Some(FormatArg::Csv), None).unwrap().format,
            Format::Csv
        );

        let bare = CommonArgs::default();
        assert_eq!(CliConfig::resolve(&bare, None, Some("99")).unwrap().seed, 99);
        assert_eq!(CliConfig::resolve(&bare, None, None).unwrap().seed, 120);
        assert!(CliConfig::resolve(&bare, None, Some("x")).is_err());
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "sed = 7\n").unwrap();
        let args = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(CliConfig::resolve(&args, None, None).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["spe", "fit", "--bogus"], &mut out, &mut err), EXIT_USAGE);
        assert!(String::from_utf8_lossy(&err).contains("Usage"));
        let mut out = Vec::new();
        assert_eq!(run(["spe", "estimate", "--help"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8_lossy(&out).contains("--story-points"));
    }
}
