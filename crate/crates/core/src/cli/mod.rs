//! The `tabkit` command line: batch subcommands over one CSV file each.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 usage error,
//! 3 input could not be read or parsed, 4 schema error, 5 model-file error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::feature_engineering::{
    drop_redundant, fill_missing, format_dropped, to_date, FillStrategy, NumericFill,
};
use crate::frame::csv::{parse_csv, write_csv, CsvOptions};
use crate::frame::{DType, Frame};
use crate::model::{
    classification_report, fit_forest, fit_logistic, fit_tree, load_model, permutation_importance,
    save_model, train_test_split, ClassificationReport, Classifier, FeatureSchema, ForestParams,
    LogisticParams, Metric, Model, ModelFile, TreeParams,
};
use crate::structdata::describe;
use crate::timeseries::{extract_dates, timebucket_series};
use crate::visualization::{
    boxplot_spec, catbox_spec, confusion_heatmap_spec, countplot_spec, histogram_spec,
    importance_spec, numeric_columns, render_svg, timeplot_spec, PlotSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "tabkit",
    version,
    about = "Profile, clean, chart and model tabular CSV data"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory for written files; created if absent
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Replace files that already exist in the output directory
    #[arg(long, global = true)]
    overwrite: bool,
    /// Seed for sampling, splitting and model fitting
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report format on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Read ISO-8601 text columns as timestamps instead of text
    #[arg(long, global = true)]
    infer_dates: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Json,
    Md,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Fill {
    Mean,
    Median,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PlotKindArg {
    Count,
    Catbox,
    Hist,
    Box,
    Time,
}

impl PlotKindArg {
    fn name(self) -> &'static str {
        match self {
            PlotKindArg::Count => "count",
            PlotKindArg::Catbox => "catbox",
            PlotKindArg::Hist => "hist",
            PlotKindArg::Box => "box",
            PlotKindArg::Time => "time",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    Logistic,
    Tree,
    Forest,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MetricArg {
    F1,
    Accuracy,
    Auc,
}

#[derive(Args, Debug)]
struct SplitArgs {
    /// Evaluate only the held-out part of a seeded split with this fraction
    #[arg(long)]
    test_fraction: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile a CSV file
    Describe { input: PathBuf },
    /// Drop single-valued columns and optionally fill missing values
    Clean {
        input: PathBuf,
        #[arg(long, value_enum)]
        fill: Option<Fill>,
    },
    /// Expand timestamp columns into calendar parts
    Dates {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<String>,
        #[arg(long)]
        keep_original: bool,
    },
    /// Write chart specs (JSON) and SVG renderings
    Plot {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKindArg,
        /// Grouping target for catbox charts
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 10)]
        bins: usize,
        /// Timestamp column for time charts
        #[arg(long)]
        time_col: Option<String>,
        /// Columns to chart instead of the eligible defaults
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<String>>,
        /// Figure size as WIDTH,HEIGHT in 100 px units
        #[arg(long, value_delimiter = ',')]
        fig_size: Option<Vec<f64>>,
    },
    /// Split, fit a classifier, write model.json and report.json
    Train {
        input: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = ModelArg::Forest)]
        model: ModelArg,
        #[arg(long, default_value_t = 0.3)]
        test_fraction: f64,
        /// Label of the positive class (default: the larger of the two)
        #[arg(long)]
        positive: Option<String>,
        /// Trees in a forest
        #[arg(long, default_value_t = 100)]
        trees: usize,
        /// Depth limit for trees and forests
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
    },
    /// Score a saved model on a CSV file
    Evaluate {
        input: PathBuf,
        #[arg(long)]
        model_file: PathBuf,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Permutation feature importance of a saved model
    Importance {
        input: PathBuf,
        #[arg(long)]
        model_file: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_enum, default_value_t = MetricArg::F1)]
        metric: MetricArg,
        #[command(flatten)]
        split: SplitArgs,
    },
}

#[derive(Debug)]
enum Failure {
    Output(String),
    Usage(String),
    Ingest(String),
    Schema(String),
    ModelFile(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Output(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Ingest(_) => 3,
            Failure::Schema(_) => 4,
            Failure::ModelFile(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Output(m)
            | Failure::Usage(m)
            | Failure::Ingest(m)
            | Failure::Schema(m)
            | Failure::ModelFile(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            Error::SchemaVersionMismatch { .. } | Error::MalformedModelFile(_) => {
                Failure::ModelFile(e.to_string())
            }
            _ => Failure::Schema(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs one command line (including the program name) and returns the
/// process exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

struct Ctx<'a> {
    g: &'a Global,
}

impl Ctx<'_> {
    fn csv_options(&self) -> CsvOptions {
        CsvOptions {
            infer_datetime: self.g.infer_dates,
            ..CsvOptions::default()
        }
    }

    fn read_frame(&self, path: &Path) -> CliResult<Frame> {
        let bytes = fs::read(path)
            .map_err(|e| Failure::Ingest(format!("cannot read {}: {e}", path.display())))?;
        parse_csv(&bytes, &self.csv_options())
            .map_err(|e| Failure::Ingest(format!("{}: {e}", path.display())))
    }

    fn read_model(&self, path: &Path) -> CliResult<ModelFile> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::ModelFile(format!("cannot read {}: {e}", path.display())))?;
        load_model(&text).map_err(|e| Failure::ModelFile(format!("{}: {e}", path.display())))
    }

    fn out_dir(&self) -> PathBuf {
        self.g.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    /// Writes every file or none: existing targets are refused up front
    /// unless overwriting was requested.
    fn write_files(&self, files: &[(String, Vec<u8>)]) -> CliResult<()> {
        let dir = self.out_dir();
        if !self.g.overwrite {
            if let Some((name, _)) = files.iter().find(|(n, _)| dir.join(n).exists()) {
                return Err(Failure::Usage(format!(
                    "{} already exists; pass --overwrite to replace it",
                    dir.join(name).display()
                )));
            }
        }
        fs::create_dir_all(&dir)
            .map_err(|e| Failure::Output(format!("cannot create {}: {e}", dir.display())))?;
        for (name, bytes) in files {
            let path = dir.join(name);
            fs::write(&path, bytes)
                .map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }

    /// Like [`Ctx::write_files`] but only when `--out-dir` was given.
    fn write_if_requested(&self, files: &[(String, Vec<u8>)]) -> CliResult<()> {
        if self.g.out_dir.is_some() {
            self.write_files(files)?;
        }
        Ok(())
    }
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

fn file_stem(text: &str) -> String {
    text.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Output(format!("cannot write output: {e}")))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let ctx = Ctx { g: &cli.global };
    match &cli.command {
        Command::Describe { input } => cmd_describe(&ctx, input, out),
        Command::Clean { input, fill } => cmd_clean(&ctx, input, *fill, out),
        Command::Dates {
            input,
            cols,
            keep_original,
        } => {
            let frame = ctx.read_frame(input)?;
            let expanded = extract_dates(&frame, cols, *keep_original)?;
            ctx.write_files(&[("dates.csv".into(), write_csv(&expanded, &ctx.csv_options()))])?;
            emit(
                out,
                &format!(
                    "Wrote dates.csv ({} rows, {} columns)\n",
                    expanded.n_rows(),
                    expanded.n_cols()
                ),
            )
        }
        Command::Plot {
            input,
            kind,
            target,
            bins,
            time_col,
            cols,
            fig_size,
        } => {
            let frame = ctx.read_frame(input)?;
            let fig_size = match fig_size.as_deref() {
                None => None,
                Some(&[w, h]) if w > 0.0 && h > 0.0 => Some((w, h)),
                Some(_) => return Err(Failure::Usage("--fig-size takes WIDTH,HEIGHT > 0".into())),
            };
            let specs = plot_specs(
                &frame,
                *kind,
                target.as_deref(),
                *bins,
                time_col.as_deref(),
                cols.as_deref(),
            )?;
            let mut files = Vec::new();
            let mut listing = String::new();
            for spec in specs {
                let spec = match fig_size {
                    Some((w, h)) => spec.with_fig_size(w, h),
                    None => spec,
                };
                spec.validate()?;
                let stem = format!("{}_{}", kind.name(), file_stem(&spec.subject));
                listing.push_str(&format!("{stem}.json\n{stem}.svg\n"));
                files.push((format!("{stem}.json"), json_bytes(&spec)));
                files.push((format!("{stem}.svg"), render_svg(&spec).into_bytes()));
            }
            ctx.write_files(&files)?;
            emit(out, &listing)
        }
        Command::Train {
            input,
            target,
            model,
            test_fraction,
            positive,
            trees,
            max_depth,
        } => {
            let frame = ctx.read_frame(input)?;
            let (train, test) = train_test_split(&frame, target, *test_fraction, cli.global.seed)?;
            let schema = FeatureSchema::fit(&train, target, positive.as_deref())?;
            let (x, y) = (schema.features(&train)?, schema.labels(&train)?);
            let tree = TreeParams {
                max_depth: Some(*max_depth),
                ..TreeParams::default()
            };
            let fitted = match model {
                ModelArg::Logistic => {
                    Model::Logistic(fit_logistic(&x, &y, &LogisticParams::default())?)
                }
                ModelArg::Tree => Model::Tree(fit_tree(&x, &y, &tree)?),
                ModelArg::Forest => {
                    let params = ForestParams {
                        n_trees: *trees,
                        tree,
                        ..ForestParams::default()
                    };
                    Model::Forest(fit_forest(&x, &y, &params, cli.global.seed)?)
                }
            };
            let file = ModelFile::new(fitted, schema);
            let report = score(&file, &test)?;
            ctx.write_files(&[
                ("model.json".into(), save_model(&file).into_bytes()),
                ("report.json".into(), json_bytes(&report)),
            ])?;
            emit(out, &render_report(&report, cli.global.format))
        }
        Command::Evaluate {
            input,
            model_file,
            target,
            split,
        } => {
            let file = ctx.read_model(model_file)?;
            let rows = eval_rows(&ctx, input, &file, target, split)?;
            let report = score(&file, &rows)?;
            ctx.write_if_requested(&[
                ("report.json".into(), json_bytes(&report)),
                (
                    "confusion.svg".into(),
                    render_svg(&confusion_heatmap_spec(&report)).into_bytes(),
                ),
            ])?;
            emit(out, &render_report(&report, cli.global.format))
        }
        Command::Importance {
            input,
            model_file,
            target,
            repeats,
            metric,
            split,
        } => {
            let file = ctx.read_model(model_file)?;
            let rows = eval_rows(&ctx, input, &file, target, split)?;
            let (x, y) = (file.schema.features(&rows)?, file.schema.labels(&rows)?);
            let metric = match metric {
                MetricArg::F1 => Metric::F1,
                MetricArg::Accuracy => Metric::Accuracy,
                MetricArg::Auc => Metric::Auc,
            };
            let report = permutation_importance(
                &file.model,
                &x,
                &y,
                &file.schema.feature_names,
                metric,
                *repeats,
                cli.global.seed,
            )?;
            ctx.write_if_requested(&[
                ("importance.json".into(), json_bytes(&report)),
                (
                    "importance.svg".into(),
                    render_svg(&importance_spec(&report)).into_bytes(),
                ),
            ])?;
            let text = match cli.global.format {
                Format::Json => String::from_utf8(json_bytes(&report)).expect("utf-8 json"),
                Format::Md | Format::Text => report.to_text(),
            };
            emit(out, &text)
        }
    }
}

fn cmd_describe(ctx: &Ctx, input: &Path, out: &mut dyn Write) -> CliResult<()> {
    let frame = ctx.read_frame(input)?;
    let report = describe(&frame, ctx.g.seed);
    let json = json_bytes(&report);
    ctx.write_if_requested(&[("describe.json".into(), json.clone())])?;
    let text = match ctx.g.format {
        Format::Json => String::from_utf8(json).expect("utf-8 json"),
        Format::Md => report.to_markdown(),
        Format::Text => report.to_text(),
    };
    emit(out, &text)
}

fn cmd_clean(ctx: &Ctx, input: &Path, fill: Option<Fill>, out: &mut dyn Write) -> CliResult<()> {
    let frame = ctx.read_frame(input)?;
    let (mut cleaned, dropped) = drop_redundant(&frame);
    let mut lines = format!("{}\n", format_dropped(&dropped));
    if let Some(fill) = fill {
        let numeric = match fill {
            Fill::Mean => NumericFill::Mean,
            Fill::Median => NumericFill::Median,
        };
        let outcome = fill_missing(&cleaned, FillStrategy { numeric });
        cleaned = outcome.frame;
        for name in outcome.untouched {
            lines.push_str(&format!("Column '{name}' has no values to fill from\n"));
        }
    }
    ctx.write_files(&[(
        "cleaned.csv".into(),
        write_csv(&cleaned, &ctx.csv_options()),
    )])?;
    emit(out, &lines)
}

fn plot_specs(
    frame: &Frame,
    kind: PlotKindArg,
    target: Option<&str>,
    bins: usize,
    time_col: Option<&str>,
    cols: Option<&[String]>,
) -> CliResult<Vec<PlotSpec>> {
    Ok(match kind {
        PlotKindArg::Count => countplot_spec(frame, cols)?,
        PlotKindArg::Catbox => {
            let target =
                target.ok_or_else(|| Failure::Usage("--kind catbox needs --target".into()))?;
            catbox_spec(frame, target)?
        }
        PlotKindArg::Hist => histogram_spec(frame, cols, bins)?,
        PlotKindArg::Box => match cols {
            Some(names) => names
                .iter()
                .map(|n| boxplot_spec(frame.column(n)?))
                .collect::<crate::Result<_>>()?,
            None => numeric_columns(frame)
                .into_iter()
                .map(boxplot_spec)
                .collect::<crate::Result<_>>()?,
        },
        PlotKindArg::Time => {
            let time_col =
                time_col.ok_or_else(|| Failure::Usage("--kind time needs --time-col".into()))?;
            let frame = match frame.column(time_col)?.dtype() {
                DType::DateTime => frame.clone(),
                _ => to_date(frame, &[time_col])?,
            };
            let values: Vec<String> = match cols {
                Some(names) => names.to_vec(),
                None => numeric_columns(&frame)
                    .iter()
                    .map(|c| c.name().to_string())
                    .collect(),
            };
            timeplot_spec(&timebucket_series(&frame, &values, time_col)?)
        }
    })
}

/// Rows to score: the whole file, or the held-out part of the same seeded
/// split `train` used.
fn eval_rows(
    ctx: &Ctx,
    input: &Path,
    file: &ModelFile,
    target: &str,
    split: &SplitArgs,
) -> CliResult<Frame> {
    let frame = ctx.read_frame(input)?;
    frame.column(target)?;
    if target != file.schema.target.name {
        return Err(Failure::Schema(format!(
            "model was trained on target '{}', not '{target}'",
            file.schema.target.name
        )));
    }
    Ok(match split.test_fraction {
        Some(f) => train_test_split(&frame, target, f, ctx.g.seed)?.1,
        None => frame,
    })
}

fn score(file: &ModelFile, rows: &Frame) -> CliResult<ClassificationReport> {
    let (x, y) = (file.schema.features(rows)?, file.schema.labels(rows)?);
    let scores = file.model.predict_proba(&x)?;
    let pred: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
    Ok(classification_report(&y, &pred, Some(&scores))?)
}

fn render_report(report: &ClassificationReport, format: Format) -> String {
    match format {
        Format::Json => String::from_utf8(json_bytes(report)).expect("utf-8 json"),
        Format::Md => report.to_markdown(),
        Format::Text => report.to_text(),
    }
}
