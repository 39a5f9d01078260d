//! `cmeval`: evaluate, compare and sweep classifier outputs from files.
//!
//! ```bash
//! cmeval eval --actual act.txt --pred pred.txt
//! cmeval --format json eval --matrix cm.json
//! cmeval compare "Classifier 1=cm1.json" "Classifier 2=cm2.json" --class-weights w.json
//! cmeval curve --scores scores.csv --kind roc --out-dir curves/
//! ```
//!
//! Exit status is 0 on success and 2 on any usage or input error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cmeval::curves::ScoreParseError;
use cmeval::{
    compare, curve, CompareInput, ConfusionMatrix, CurveKind, Error as EvalError, ReportDocument,
    ScaleRegistry, ScoreMatrix, Weights,
};

#[derive(Parser, Debug)]
#[command(
    name = "cmeval",
    version,
    about = "Confusion-matrix statistics, benchmarks and model comparison"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// JSON scale table replacing default benchmark scales by id
    #[arg(long, global = true, value_name = "PATH")]
    scales: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a confusion matrix and print every statistic.
    ///
    /// LAMBDA_A predicts the actual class from the predicted class;
    /// LAMBDA_B predicts the predicted class from the actual class.
    Eval(EvalArgs),
    /// Rank models by composite class and overall benchmark scores
    Compare(CompareArgs),
    /// Write one-vs-rest ROC or PR point files from a scores CSV
    Curve(CurveArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Actual labels, one per line
    #[arg(long, requires = "pred", conflicts_with = "matrix")]
    actual: Option<PathBuf>,

    /// Predicted labels, one per line
    #[arg(long, requires = "actual", conflicts_with = "matrix")]
    pred: Option<PathBuf>,

    /// Label order, one per line (defaults to the sorted observed labels)
    #[arg(long, requires = "actual")]
    labels: Option<PathBuf>,

    /// JSON matrix document `{"labels": [...], "matrix": [[...]]}`
    #[arg(long, required_unless_present = "actual")]
    matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Matrix files as `NAME=PATH`, or `PATH` to use the file stem as name
    #[arg(required = true, num_args = 1.., value_name = "MODEL")]
    models: Vec<String>,

    /// JSON map label -> weight; unlisted classes weigh 0
    #[arg(long, value_name = "PATH")]
    class_weights: Option<PathBuf>,

    /// JSON map class-benchmark id -> weight
    #[arg(long, value_name = "PATH")]
    class_benchmark_weights: Option<PathBuf>,

    /// JSON map overall-benchmark id -> weight
    #[arg(long, value_name = "PATH")]
    overall_benchmark_weights: Option<PathBuf>,

    /// Pick the best model by class score alone
    #[arg(long)]
    by_class: bool,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// CSV with header `actual,<label1>,<label2>,...`
    #[arg(long)]
    scores: PathBuf,

    #[arg(long, value_enum, default_value_t = KindArg::Roc)]
    kind: KindArg,

    /// Only this class (default: every class)
    #[arg(long)]
    class: Option<String>,

    /// Thresholds in [0, 1], one per line (default: every distinct score)
    #[arg(long, value_name = "PATH")]
    thresholds: Option<PathBuf>,

    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Roc,
    Pr,
}

impl From<KindArg> for CurveKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Roc => CurveKind::Roc,
            KindArg::Pr => CurveKind::Pr,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let scales = load_scales(cli.scales.as_deref())?;
    match &cli.command {
        Command::Eval(args) => cmd_eval(args, cli.format, &scales),
        Command::Compare(args) => cmd_compare(args, cli.format, &scales),
        Command::Curve(args) => cmd_curve(args, cli.format),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = read(path)?;
    let mut lines: Vec<String> = text
        .lines()
        .map(|l| l.trim_end_matches('\r').to_owned())
        .collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    Ok(lines)
}

fn load_scales(path: Option<&Path>) -> Result<ScaleRegistry> {
    let registry = ScaleRegistry::default();
    match path {
        None => Ok(registry),
        Some(p) => registry
            .with_override_json(&read(p)?)
            .with_context(|| format!("in scale table {}", p.display())),
    }
}

fn load_matrix(path: &Path) -> Result<ConfusionMatrix> {
    ConfusionMatrix::from_json(&read(path)?)
        .with_context(|| format!("in matrix file {}", path.display()))
}

fn load_weights(path: &Path) -> Result<Weights> {
    let map: BTreeMap<String, f64> = serde_json::from_str(&read(path)?).with_context(|| {
        format!(
            "weights file {} must be a JSON object of numbers",
            path.display()
        )
    })?;
    Ok(map)
}

fn cmd_eval(args: &EvalArgs, format: Format, scales: &ScaleRegistry) -> Result<String> {
    let cm = match (&args.matrix, &args.actual, &args.pred) {
        (Some(m), None, None) => load_matrix(m)?,
        (None, Some(a), Some(p)) => {
            let actual = read_lines(a)?;
            let pred = read_lines(p)?;
            let order = args.labels.as_deref().map(read_lines).transpose()?;
            ConfusionMatrix::from_vectors(&actual, &pred, order.as_deref()).map_err(
                |e| match e {
                    EvalError::VectorLength {
                        actual: na,
                        predicted: np,
                    } => anyhow!(
                        "length mismatch: {} has {} labels but {} has {}",
                        a.display(),
                        na,
                        p.display(),
                        np
                    ),
                    other => other.into(),
                },
            )?
        }
        _ => bail!("give either --matrix or both --actual and --pred"),
    };
    let report = ReportDocument::new(&cm, scales)?;
    Ok(match format {
        Format::Text => format!("{}\n{}", cm.render_text(), report.render_text()),
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    })
}

fn parse_model(spec: &str) -> Result<(String, PathBuf)> {
    if let Some((name, path)) = spec.split_once('=') {
        if name.is_empty() || path.is_empty() {
            bail!("model `{}` must be NAME=PATH", spec);
        }
        return Ok((name.to_owned(), PathBuf::from(path)));
    }
    let path = PathBuf::from(spec);
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("cannot derive a model name from `{}`", spec))?
        .to_owned();
    Ok((name, path))
}

fn cmd_compare(args: &CompareArgs, format: Format, scales: &ScaleRegistry) -> Result<String> {
    let mut entries = BTreeMap::new();
    for spec in &args.models {
        let (name, path) = parse_model(spec)?;
        let cm = load_matrix(&path)?;
        if entries.insert(name.clone(), cm).is_some() {
            bail!("model name `{}` given twice", name);
        }
    }
    let input = CompareInput {
        entries,
        class_weights: args
            .class_weights
            .as_deref()
            .map(load_weights)
            .transpose()?,
        class_benchmark_weights: args
            .class_benchmark_weights
            .as_deref()
            .map(load_weights)
            .transpose()?,
        overall_benchmark_weights: args
            .overall_benchmark_weights
            .as_deref()
            .map(load_weights)
            .transpose()?,
        by_class: args.by_class,
    };
    let report = compare(&input, scales)?;
    Ok(match format {
        Format::Text => report.render_text(),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut out = String::from("rank,name,class_score,overall_score\n");
            for r in &report.rows {
                out += &format!(
                    "{},{},{},{}\n",
                    r.rank,
                    csv_field(&r.name),
                    r.class_score,
                    r.overall_score
                );
            }
            out
        }
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// File-name-safe form of a class label.
fn file_token(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn cmd_curve(args: &CurveArgs, format: Format) -> Result<String> {
    let scores = ScoreMatrix::from_csv(&read(&args.scores)?)
        .map_err(|e| match e {
            ScoreParseError::Invalid(inner) => anyhow!(inner),
            other => anyhow!(other),
        })
        .with_context(|| format!("in scores file {}", args.scores.display()))?;
    let thresholds = match &args.thresholds {
        None => None,
        Some(p) => Some(
            read_lines(p)?
                .iter()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    l.trim()
                        .parse::<f64>()
                        .with_context(|| format!("bad threshold `{}` in {}", l, p.display()))
                })
                .collect::<Result<Vec<f64>>>()?,
        ),
    };
    let classes: Vec<String> = match &args.class {
        Some(c) => {
            if !scores.labels().contains(c) {
                bail!("class `{}` is not in the scores header", c);
            }
            vec![c.clone()]
        }
        None => scores.labels().to_vec(),
    };

    let kind = CurveKind::from(args.kind);
    let prefix = kind.to_string().to_lowercase();
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;

    let mut summary = serde_json::Map::new();
    for class in &classes {
        match curve(&scores, class, kind, thresholds.as_deref()) {
            Ok(c) => {
                let path = args
                    .out_dir
                    .join(format!("{}_{}.csv", prefix, file_token(class)));
                fs::write(&path, c.to_csv())
                    .with_context(|| format!("cannot write {}", path.display()))?;
                summary.insert(class.clone(), c.auc.into());
            }
            Err(EvalError::DegenerateCurve(_)) => {
                eprintln!(
                    "warning: {} curve for class `{}` is degenerate, skipped",
                    kind, class
                );
                summary.insert(class.clone(), serde_json::Value::Null);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let doc = serde_json::json!({ "kind": kind.to_string(), "auc": summary });
    let json = serde_json::to_string_pretty(&doc)? + "\n";
    let path = args.out_dir.join(format!("{}_auc.json", prefix));
    fs::write(&path, &json).with_context(|| format!("cannot write {}", path.display()))?;

    Ok(match format {
        Format::Json => json,
        Format::Text | Format::Csv => {
            let mut out = format!("class,{}_auc\n", prefix);
            for class in &classes {
                let v = &summary[class];
                out += &format!(
                    "{},{}\n",
                    csv_field(class),
                    if v.is_null() {
                        "None".into()
                    } else {
                        v.to_string()
                    }
                );
            }
            out
        }
    })
}
