//! `greyfc` command line.
//!
//! Exit codes: 0 success, 2 input or configuration error, 3 numerical
//! failure (singular system or parameters, non-finite output).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{GreyError, Result};
use crate::experiments::{
    builtin_dataset, grid_csv, grid_search_effects, plot_rows, render_table, run_comparison, search_fgm, search_ufgm,
    CaseDataset, GridRange, GridSpec, ModelRun, SearchPolicy, SearchSummary,
};
use crate::fracops::Series;
use crate::io::read_series_csv;
use crate::models::{
    evaluate, Anchor, Dgm11, Fgm11, FitReport, Gm11, GreyModel, HyperParams, ModelKind, Ufgm11, EPS_SINGULAR,
};
use crate::optimize::{Algorithm, SearchSpace};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const DEFAULT_SEED: u64 = 42;
pub const CONFIG_ENV: &str = "GREYFC_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "greyfc", version, about = "Fractional grey-model forecasting")]
pub struct Cli {
    /// JSON file with default flag values (overrides $GREYFC_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on the training split and score the holdout.
    Fit(FitArgs),
    /// Fit on the whole input (by default) and forecast ahead.
    Forecast(FitArgs),
    /// Search the fractional orders of FGM or UFGM.
    Search(SearchArgs),
    /// Sensitivity grid over initial value, orders and (a, b, c).
    Grid(GridArgs),
    /// Rerun the built-in four-model case studies.
    Reproduce(ReproduceArgs),
    /// Turn a report document into plot-ready CSV.
    ExportPlot(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerChoice {
    Pso,
    Gwo,
    Woa,
    Alo,
    All,
}

impl OptimizerChoice {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            OptimizerChoice::Pso => vec![Algorithm::Pso],
            OptimizerChoice::Gwo => vec![Algorithm::Gwo],
            OptimizerChoice::Woa => vec![Algorithm::Woa],
            OptimizerChoice::Alo => vec![Algorithm::Alo],
            OptimizerChoice::All => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Gm,
    Dgm,
    Fgm,
    Ufgm,
}

impl From<ModelChoice> for ModelKind {
    fn from(m: ModelChoice) -> Self {
        match m {
            ModelChoice::Gm => ModelKind::Gm,
            ModelChoice::Dgm => ModelKind::Dgm,
            ModelChoice::Fgm => ModelKind::Fgm,
            ModelChoice::Ufgm => ModelKind::Ufgm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorChoice {
    First,
    Last,
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseChoice {
    Case1,
    Case2,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV with a `value` column, optionally preceded by a `label` column.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Built-in dataset instead of --input (case1_henan, case2_chongqing).
    #[arg(long, conflicts_with = "input")]
    pub dataset: Option<String>,
    /// Number of leading observations used for fitting.
    #[arg(long)]
    pub train_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerChoice>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of consecutive seeds per algorithm, starting at --seed.
    #[arg(long)]
    pub restarts: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub model: Option<ModelChoice>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Memory order (UFGM) or accumulation order (FGM); searched when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Accumulation order (UFGM); searched when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// FGM response anchor.
    #[arg(long, value_enum)]
    pub anchor: Option<AnchorChoice>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Report path (JSON); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// fgm or ufgm.
    #[arg(long, value_enum)]
    pub model: Option<ModelChoice>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum)]
    pub anchor: Option<AnchorChoice>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Initial accumulated value range `start:stop:step`.
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long)]
    pub alpha_grid: Option<String>,
    #[arg(long)]
    pub r_grid: Option<String>,
    #[arg(long)]
    pub a_grid: Option<String>,
    #[arg(long)]
    pub b_grid: Option<String>,
    #[arg(long)]
    pub c_grid: Option<String>,
    /// Records path (CSV); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub case: CaseChoice,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Structured comparison (JSON); defaults to `reproduce-<case>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Human-readable table path; stdout when absent.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Report document written by fit, forecast, search or reproduce.
    #[arg(long)]
    pub report: PathBuf,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Defaults read from a JSON config file. Flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelChoice>,
    pub train_n: Option<usize>,
    pub horizon: Option<usize>,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub anchor: Option<AnchorChoice>,
    pub optimizer: Option<OptimizerChoice>,
    pub population: Option<usize>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<u64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GreyError::InvalidConfig(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| GreyError::InvalidConfig(format!("config {}: {e}", path.display())))
    }
}

/// Observations handed to a command, with where they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub source: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub train_n: usize,
}

/// Structured output of `fit`, `forecast`, `search` and `reproduce`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    pub seed: u64,
    pub input: InputSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<SearchPolicy>,
    pub runs: Vec<ModelRun>,
}

impl Document {
    pub fn reports(&self) -> impl Iterator<Item = &FitReport> {
        self.runs.iter().map(|r| &r.report)
    }
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| GreyError::InvalidConfig(format!("not a greyfc report: {e}")))
}

/// Source description, values, labels and the requested training size.
type LoadedInput = (String, Series, Option<Vec<String>>, Option<usize>);

fn load_input(args: &InputArgs, cfg: &FileConfig) -> Result<LoadedInput> {
    let train_n = args.train_n.or(cfg.train_n);
    match (&args.input, &args.dataset) {
        (Some(path), _) => {
            let parsed = read_series_csv(path)?;
            Ok((path.display().to_string(), parsed.values, parsed.labels, train_n))
        }
        (None, Some(name)) => {
            let ds = builtin_dataset(name)?;
            Ok((ds.name.clone(), ds.values, ds.labels, train_n.or(Some(ds.train_len))))
        }
        (None, None) => Err(GreyError::InvalidConfig(
            "one of --input or --dataset is required".into(),
        )),
    }
}

fn check_train_n(train_n: usize, len: usize) -> Result<()> {
    if train_n > len {
        return Err(GreyError::InvalidConfig(format!(
            "--train-n {train_n} exceeds the {len} available observations"
        )));
    }
    if train_n < crate::fracops::MIN_MODEL_LEN {
        return Err(GreyError::InvalidConfig(format!(
            "--train-n {train_n} is below the minimum of {}",
            crate::fracops::MIN_MODEL_LEN
        )));
    }
    Ok(())
}

fn policy_from(opt: &OptimizerArgs, cfg: &FileConfig, anchor: Option<AnchorChoice>) -> Result<(SearchPolicy, u64)> {
    let seed = opt.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let restarts = opt.restarts.or(cfg.restarts).unwrap_or(1);
    if restarts == 0 {
        return Err(GreyError::InvalidConfig("--restarts must be at least 1".into()));
    }
    let defaults = SearchPolicy::default();
    let r_min = opt.r_min.or(cfg.r_min).unwrap_or(defaults.ufgm_space.lower()[0]);
    let r_max = opt.r_max.or(cfg.r_max).unwrap_or(defaults.ufgm_space.upper()[0]);
    let alpha_min = opt
        .alpha_min
        .or(cfg.alpha_min)
        .unwrap_or(defaults.ufgm_space.lower()[1]);
    let alpha_max = opt
        .alpha_max
        .or(cfg.alpha_max)
        .unwrap_or(defaults.ufgm_space.upper()[1]);
    if !(r_min > EPS_SINGULAR) {
        return Err(GreyError::InvalidConfig(format!(
            "--r-min {r_min} must exceed {EPS_SINGULAR:e}; r = 0 is singular"
        )));
    }
    if !(alpha_min > 0.0) {
        return Err(GreyError::InvalidConfig(format!(
            "--alpha-min {alpha_min} must be positive"
        )));
    }
    let fgm_anchors = match anchor.or(cfg.anchor).unwrap_or(AnchorChoice::Best) {
        AnchorChoice::First => vec![Anchor::First],
        AnchorChoice::Last => vec![Anchor::Last],
        AnchorChoice::Best => vec![Anchor::First, Anchor::Last],
    };
    let policy = SearchPolicy {
        algorithms: opt
            .optimizer
            .or(cfg.optimizer)
            .unwrap_or(OptimizerChoice::All)
            .algorithms(),
        seeds: (0..restarts).map(|i| seed.wrapping_add(i)).collect(),
        population: opt.population.or(cfg.population).unwrap_or(defaults.population),
        iterations: opt.iterations.or(cfg.iterations).unwrap_or(defaults.iterations),
        ufgm_space: SearchSpace::new(vec![r_min, alpha_min], vec![r_max, alpha_max])?,
        fgm_space: SearchSpace::new(vec![r_min], vec![r_max])?,
        fgm_anchors,
    };
    crate::optimize::OptimizerConfig {
        population: policy.population,
        iterations: policy.iterations,
        ..crate::optimize::OptimizerConfig::new(Algorithm::Pso, seed)
    }
    .validate()?;
    Ok((policy, seed))
}

fn fixed_anchor(choice: Option<AnchorChoice>) -> Anchor {
    match choice {
        Some(AnchorChoice::Last) => Anchor::Last,
        _ => Anchor::First,
    }
}

fn run_fit(args: &FitArgs, cfg: &FileConfig, forecast_mode: bool) -> Result<String> {
    let (source, values, labels, train_n) = load_input(&args.input, cfg)?;
    let len = values.len();
    let train_n = if forecast_mode {
        args.input.train_n.or(cfg.train_n).unwrap_or(len)
    } else {
        train_n.unwrap_or(len)
    };
    check_train_n(train_n, len)?;
    let horizon = args
        .horizon
        .or(cfg.horizon)
        .unwrap_or(if forecast_mode && train_n == len {
            4
        } else {
            len - train_n
        });
    let (train, holdout) = values.split(train_n)?;
    train.check_modeling()?;

    let model = args.model.or(cfg.model).unwrap_or(ModelChoice::Ufgm);
    let r = args.r.or(cfg.r);
    let alpha = args.alpha.or(cfg.alpha);
    let anchor_choice = args.anchor.or(cfg.anchor);
    let (policy, seed) = policy_from(&args.optimizer, cfg, anchor_choice)?;

    let mut searched = None;
    let mut used_policy = None;
    let report = match model {
        ModelChoice::Gm => evaluate(&Gm11, &train, horizon, holdout.values())?,
        ModelChoice::Dgm => evaluate(&Dgm11, &train, horizon, holdout.values())?,
        ModelChoice::Fgm => {
            let fgm = match r {
                Some(r) => Fgm11::with_anchor(r, fixed_anchor(anchor_choice)),
                None => {
                    let (anchor, summary) = search_fgm(&train, &policy)?;
                    let r = summary.best_run().best_point[0];
                    searched = Some(summary);
                    used_policy = Some(policy.clone());
                    Fgm11::with_anchor(r, anchor)
                }
            };
            evaluate(&fgm, &train, horizon, holdout.values())?
        }
        ModelChoice::Ufgm => {
            let hyper = match (r, alpha) {
                (Some(r), Some(alpha)) => HyperParams::new(r, alpha)?,
                (None, None) => {
                    let summary = search_ufgm(&train, &policy)?;
                    let p = summary.best_run().best_point.clone();
                    searched = Some(summary);
                    used_policy = Some(policy.clone());
                    HyperParams::new(p[0], p[1])?
                }
                _ => {
                    return Err(GreyError::InvalidConfig(
                        "give both --r and --alpha, or neither to search them".into(),
                    ))
                }
            };
            evaluate(&Ufgm11::new(hyper), &train, horizon, holdout.values())?
        }
    };
    let doc = Document {
        command: if forecast_mode { "forecast" } else { "fit" }.into(),
        seed,
        input: InputSummary {
            source,
            values: values.into_inner(),
            labels,
            train_n,
        },
        policy: used_policy,
        runs: vec![ModelRun {
            report,
            search: searched,
        }],
    };
    Ok(to_json(&doc))
}

fn run_search(args: &SearchArgs, cfg: &FileConfig) -> Result<String> {
    let (source, values, labels, train_n) = load_input(&args.input, cfg)?;
    let len = values.len();
    let train_n = train_n.unwrap_or(len);
    check_train_n(train_n, len)?;
    let horizon = args.horizon.or(cfg.horizon).unwrap_or(len - train_n);
    let (train, holdout) = values.split(train_n)?;
    train.check_modeling()?;
    let (policy, seed) = policy_from(&args.optimizer, cfg, args.anchor)?;

    let model = args.model.or(cfg.model).unwrap_or(ModelChoice::Ufgm);
    let run = match model {
        ModelChoice::Ufgm => {
            let summary = search_ufgm(&train, &policy)?;
            let p = &summary.best_run().best_point;
            let model = Ufgm11::new(HyperParams::new(p[0], p[1])?);
            finish_search(&model, summary, &train, horizon, holdout.values())?
        }
        ModelChoice::Fgm => {
            let (anchor, summary) = search_fgm(&train, &policy)?;
            let model = Fgm11::with_anchor(summary.best_run().best_point[0], anchor);
            finish_search(&model, summary, &train, horizon, holdout.values())?
        }
        other => {
            return Err(GreyError::InvalidConfig(format!(
                "{} has no orders to search; use fgm or ufgm",
                ModelKind::from(other)
            )))
        }
    };
    let doc = Document {
        command: "search".into(),
        seed,
        input: InputSummary {
            source,
            values: values.into_inner(),
            labels,
            train_n,
        },
        policy: Some(policy),
        runs: vec![run],
    };
    Ok(to_json(&doc))
}

fn finish_search<M: GreyModel>(
    model: &M,
    summary: SearchSummary,
    train: &Series,
    horizon: usize,
    holdout: &[f64],
) -> Result<ModelRun> {
    Ok(ModelRun {
        report: evaluate(model, train, horizon, holdout)?,
        search: Some(summary),
    })
}

fn parse_range(flag: &str, value: &Option<String>, default: GridRange) -> Result<GridRange> {
    match value {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|e: GreyError| GreyError::InvalidConfig(format!("--{flag}: {e}"))),
    }
}

fn run_grid(args: &GridArgs, cfg: &FileConfig) -> Result<String> {
    let (_, values, _, train_n) = if args.input.input.is_none() && args.input.dataset.is_none() {
        let ds = builtin_dataset("case1_henan")?;
        (
            ds.name.clone(),
            ds.values,
            ds.labels,
            args.input.train_n.or(Some(ds.train_len)),
        )
    } else {
        load_input(&args.input, cfg)?
    };
    let train_n = train_n.unwrap_or(values.len());
    check_train_n(train_n, values.len())?;
    let (train, _) = values.split(train_n)?;
    let d = GridSpec::default();
    let spec = GridSpec {
        initial: parse_range("initial", &args.initial, d.initial)?,
        alpha: parse_range("alpha-grid", &args.alpha_grid, d.alpha)?,
        r: parse_range("r-grid", &args.r_grid, d.r)?,
        a: parse_range("a-grid", &args.a_grid, d.a)?,
        b: parse_range("b-grid", &args.b_grid, d.b)?,
        c: parse_range("c-grid", &args.c_grid, d.c)?,
    };
    let records = grid_search_effects(&train, &spec)?;
    Ok(grid_csv(&records))
}

fn run_reproduce(args: &ReproduceArgs, cfg: &FileConfig) -> Result<(String, String, PathBuf)> {
    let name = match args.case {
        CaseChoice::Case1 => "case1_henan",
        CaseChoice::Case2 => "case2_chongqing",
    };
    let ds: CaseDataset = builtin_dataset(name)?;
    let (policy, seed) = policy_from(&args.optimizer, cfg, None)?;
    let cmp = run_comparison(&ds, &policy)?;
    let table = render_table(&cmp);
    let doc = Document {
        command: "reproduce".into(),
        seed,
        input: InputSummary {
            source: ds.name.clone(),
            values: ds.values.values().to_vec(),
            labels: ds.labels.clone(),
            train_n: ds.train_len,
        },
        policy: Some(cmp.policy),
        runs: cmp.runs,
    };
    let out = args.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!(
            "reproduce-{}.json",
            if name.starts_with("case1") { "case1" } else { "case2" }
        ))
    });
    Ok((table, to_json(&doc), out))
}

fn run_export(args: &ExportArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.report)
        .map_err(|e| GreyError::InvalidConfig(format!("cannot read {}: {e}", args.report.display())))?;
    let doc = parse_document(&text)?;
    let reports: Vec<FitReport> = doc.reports().cloned().collect();
    Ok(plot_rows(&doc.input.values, &reports))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| GreyError::InvalidConfig(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(explicit: Option<&Path>) -> Result<FileConfig> {
    if let Some(path) = explicit {
        return FileConfig::load(path);
    }
    match std::env::var_os(CONFIG_ENV) {
        Some(p) if !p.is_empty() => FileConfig::load(Path::new(&p)),
        _ => Ok(FileConfig::default()),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Fit(a) => emit(a.out.as_deref(), &run_fit(a, &cfg, false)?),
        Command::Forecast(a) => emit(a.out.as_deref(), &run_fit(a, &cfg, true)?),
        Command::Search(a) => emit(a.out.as_deref(), &run_search(a, &cfg)?),
        Command::Grid(a) => emit(a.out.as_deref(), &run_grid(a, &cfg)?),
        Command::Reproduce(a) => {
            let (table, json, out) = run_reproduce(a, &cfg)?;
            emit(Some(&out), &json)?;
            emit(a.table.as_deref(), &table)?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        Command::ExportPlot(a) => emit(a.out.as_deref(), &run_export(a)?),
    }
}

pub fn exit_code(err: &GreyError) -> u8 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("greyfc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
