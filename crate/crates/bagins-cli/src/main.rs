//! Command-line front end: derive priorities, individualize scales, generate
//! synthetic studies, evaluate datasets against ground truth, and rebuild
//! the random-index table. Every run is reproducible from its manifest.

mod config;
mod manifest;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bagins::consistency::{consistency, RandomIndexTable};
use bagins::eval::{aggregate, evaluate_dataset, load_dataset, records_to_csv, DatasetFormat};
use bagins::individualize::individualize_scale;
use bagins::io::{parse_pcm, PcmFormat};
use bagins::pcm::{realize, validate_pcm, LinguisticPcm};
use bagins::priority::{eigen_priority_default, geomean_priority};
use bagins::scale::ScaleAssignment;
use bagins::study::{generate_batch, instances_to_jsonl};
use bagins::Error;

use config::ResolvedConfig;
use manifest::{read_input, write_atomic, RunManifest};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> CliError {
        let code = match err {
            Error::NonConvergence { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bagins",
    version,
    about = "Priority vectors from linguistic pairwise comparisons, with per-decision-maker scale individualization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed overriding the config file value.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output path; stdout when omitted (evaluate requires it).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format where a command supports both.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Eigenvector,
    GeometricMean,
}

#[derive(Subcommand)]
enum Command {
    /// Derive priorities and a consistency report from a PCM file.
    Derive {
        /// PCM document (.json or .csv).
        #[arg(long)]
        pcm: PathBuf,
        /// Scale file: a JSON array of 9 values, or an `individualize`
        /// result object with a "scale" field. Defaults to the fixed scale.
        #[arg(long)]
        scale: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Eigenvector)]
        method: MethodArg,
    },
    /// Search for the inconsistency-minimizing scale of one PCM.
    Individualize {
        #[arg(long)]
        pcm: PathBuf,
    },
    /// Generate a synthetic study batch as JSON lines.
    Simulate,
    /// Evaluate a dataset against ground truth; writes <out>.csv,
    /// <out>.summary.json and <out>.manifest.json.
    Evaluate {
        /// JSONL file or directory of CSV matrices.
        #[arg(long)]
        dataset: PathBuf,
        /// Ground-truth sidecar JSON; optional when the dataset embeds truth
        /// or the directory contains truth.json.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Derive the random-index table by Monte Carlo simulation.
    RiTable {
        #[arg(long, default_value_t = 3)]
        min_dim: usize,
        #[arg(long, default_value_t = 15)]
        max_dim: usize,
        #[arg(long, default_value_t = 500_000)]
        samples: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Derive { pcm, scale, method } => cmd_derive(&cli, pcm, scale.as_deref(), *method),
        Command::Individualize { pcm } => cmd_individualize(&cli, pcm),
        Command::Simulate => cmd_simulate(&cli),
        Command::Evaluate { dataset, truth } => cmd_evaluate(&cli, dataset, truth.as_deref()),
        Command::RiTable {
            min_dim,
            max_dim,
            samples,
        } => cmd_ri_table(&cli, *min_dim, *max_dim, *samples),
    }
}

fn load_pcm_file(path: &Path) -> Result<LinguisticPcm, CliError> {
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => PcmFormat::Csv,
        _ => PcmFormat::Json,
    };
    let text = read_input(path)?;
    let pcm = parse_pcm(&text, format)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let report = validate_pcm(&pcm);
    if !report.ok() {
        return Err(CliError::input(format!(
            "{}: invalid PCM: {report}",
            path.display()
        )));
    }
    Ok(pcm)
}

fn load_scale_file(path: &Path) -> Result<ScaleAssignment, CliError> {
    let text = read_input(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let scale_value = match &value {
        serde_json::Value::Object(map) => map
            .get("scale")
            .ok_or_else(|| CliError::input(format!("{}: no \"scale\" field", path.display())))?,
        other => other,
    };
    serde_json::from_value(scale_value.clone())
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `--out` (with a manifest) or stdout (without one).
fn emit(
    cli: &Cli,
    text: &str,
    manifest: impl FnOnce(&Path) -> RunManifest,
) -> Result<(), CliError> {
    match &cli.out {
        Some(out) => {
            write_atomic(out, text.as_bytes())?;
            manifest(out).write_next_to(out)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_derive(
    cli: &Cli,
    pcm_path: &Path,
    scale_path: Option<&Path>,
    method: MethodArg,
) -> Result<(), CliError> {
    let pcm = load_pcm_file(pcm_path)?;
    let scale = match scale_path {
        Some(path) => load_scale_file(path)?,
        None => ScaleAssignment::saaty(),
    };
    let matrix = realize(&pcm, &scale)?;
    let report = consistency(&matrix, RandomIndexTable::builtin())?;
    let (weights, method_name) = match method {
        MethodArg::Eigenvector => (eigen_priority_default(&matrix)?.priorities, "eigenvector"),
        MethodArg::GeometricMean => (geomean_priority(&matrix), "geometric_mean"),
    };

    let text = match cli.format {
        OutputFormat::Json => {
            let doc = json!({
                "id": pcm.id,
                "items": pcm.items,
                "method": method_name,
                "weights": weights.weights(),
                "lambda_max": report.lambda_max,
                "ci": report.ci,
                "cr": report.cr,
                "iterations": report.iterations,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
            text.push('\n');
            text
        }
        OutputFormat::Csv => {
            let mut text = String::from("item,weight\n");
            for (item, weight) in pcm.items.iter().zip(weights.weights()) {
                text.push_str(&format!("{item},{weight}\n"));
            }
            text.push_str(&format!(
                "# lambda_max={} ci={} cr={}\n",
                report.lambda_max, report.ci, report.cr
            ));
            text
        }
    };

    let mut inputs = vec![pcm_path];
    if let Some(path) = scale_path {
        inputs.push(path);
    }
    emit(cli, &text, |out| {
        RunManifest::new(
            "derive",
            None,
            "defaults",
            json!({"method": method_name}),
            &inputs,
            &[out],
        )
    })
}

fn cmd_individualize(cli: &Cli, pcm_path: &Path) -> Result<(), CliError> {
    let pcm = load_pcm_file(pcm_path)?;
    let resolved = ResolvedConfig::load(cli.config.as_deref())?;
    let cfg = resolved.individualization()?;
    let result = individualize_scale(&pcm, &cfg, RandomIndexTable::builtin())?;

    let mut doc = json!({"id": pcm.id});
    let result_value = serde_json::to_value(&result).expect("result serializes");
    doc.as_object_mut().expect("doc is an object").extend(
        result_value
            .as_object()
            .expect("result is an object")
            .clone(),
    );
    let mut text = serde_json::to_string_pretty(&doc).expect("doc serializes");
    text.push('\n');

    emit(cli, &text, |out| {
        RunManifest::new(
            "individualize",
            None,
            &resolved.source,
            serde_json::to_value(&cfg).expect("config serializes"),
            &[pcm_path],
            &[out],
        )
    })
}

fn cmd_simulate(cli: &Cli) -> Result<(), CliError> {
    let resolved = ResolvedConfig::load(cli.config.as_deref())?;
    let cfg = resolved.study(cli.seed)?;
    let batch = generate_batch(&cfg)?;
    let text = instances_to_jsonl(&batch);
    emit(cli, &text, |out| {
        let inputs: Vec<&Path> = cli.config.as_deref().into_iter().collect();
        RunManifest::new(
            "simulate",
            Some(cfg.seed),
            &resolved.source,
            serde_json::to_value(&cfg).expect("config serializes"),
            &inputs,
            &[out],
        )
    })
}

fn cmd_evaluate(cli: &Cli, dataset: &Path, truth: Option<&Path>) -> Result<(), CliError> {
    let out = cli
        .out
        .as_deref()
        .ok_or_else(|| CliError::input("evaluate requires --out <prefix>"))?;
    let format = if dataset.is_dir() {
        DatasetFormat::CsvDir
    } else {
        DatasetFormat::Jsonl
    };
    let entries = load_dataset(dataset, format, truth)?;
    if entries.is_empty() {
        return Err(CliError::input(format!(
            "no matrices found in {}",
            dataset.display()
        )));
    }
    let resolved = ResolvedConfig::load(cli.config.as_deref())?;
    let cfg = resolved.individualization()?;
    let records = evaluate_dataset(&entries, &cfg, RandomIndexTable::builtin())?;
    let summary = aggregate(&records)?;

    let csv_path = out.with_file_name(format!(
        "{}.csv",
        out.file_name().unwrap_or_default().to_string_lossy()
    ));
    let summary_path = out.with_file_name(format!(
        "{}.summary.json",
        out.file_name().unwrap_or_default().to_string_lossy()
    ));
    write_atomic(&csv_path, records_to_csv(&records).as_bytes())?;
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_text.push('\n');
    write_atomic(&summary_path, summary_text.as_bytes())?;

    let mut inputs = vec![dataset];
    if let Some(path) = truth {
        inputs.push(path);
    }
    if let Some(path) = cli.config.as_deref() {
        inputs.push(path);
    }
    RunManifest::new(
        "evaluate",
        None,
        &resolved.source,
        serde_json::to_value(&cfg).expect("config serializes"),
        &inputs,
        &[&csv_path, &summary_path],
    )
    .write_next_to(out)?;
    Ok(())
}

fn cmd_ri_table(cli: &Cli, min_dim: usize, max_dim: usize, samples: u64) -> Result<(), CliError> {
    if min_dim < 3 || max_dim < min_dim {
        return Err(CliError::input(format!(
            "dimension range {min_dim}..={max_dim} is invalid (minimum dimension 3)"
        )));
    }
    if samples < 10_000 {
        return Err(CliError::input("samples must be at least 10000"));
    }
    let seed = cli.seed.unwrap_or(42);
    let table = RandomIndexTable::generate(min_dim..=max_dim, samples, seed);
    let mut text = table.to_json();
    text.push('\n');
    emit(cli, &text, |out| {
        RunManifest::new(
            "ri-table",
            Some(seed),
            "defaults",
            json!({"min_dim": min_dim, "max_dim": max_dim, "samples": samples}),
            &[],
            &[out],
        )
    })
}
