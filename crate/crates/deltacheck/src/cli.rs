//! The `deltacheck` command line: `check`, `generate` and `compare`.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use deltacheck_core::delta::OperationKind;
use deltacheck_core::dsl::{serialize_manifest, serialize_model, Manifest};
use deltacheck_core::model::{Model, ModelSet};
use deltacheck_core::{CheckError, CheckReport, Checker, ImpactTable, ProductLine, RuleId, Strategy};

use crate::load::load_product_line;
use crate::report::{comparison_csv, comparison_table, render_text, totals, JsonReport};

/// No error diagnostics.
pub const EXIT_OK: u8 = 0;
/// Error diagnostics, or a delta that cannot be applied.
pub const EXIT_INCONSISTENT: u8 = 1;
/// Bad usage, or a manifest, model or delta file that cannot be loaded.
pub const EXIT_FAILURE: u8 = 2;
/// The strategies disagree on some variant's diagnostics.
pub const EXIT_DISAGREEMENT: u8 = 3;

const STRATEGIES: [&str; 3] = ["product", "incremental", "delta"];

#[derive(Debug, Parser)]
#[command(name = "deltacheck", version, about = "Consistency checking for delta-oriented automation product lines")]
struct Cli {
    /// JSON object replacing impact-table entries, e.g. {"add task": ["W05"]}.
    #[arg(long, global = true, hide = true, value_name = "PATH")]
    impact_override: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the core and every variant of a product line.
    Check {
        manifest: PathBuf,
        #[arg(long, default_value = "incremental", value_parser = PossibleValuesParser::new(STRATEGIES))]
        strategy: String,
        /// Write the JSON report to PATH.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Check only this variant (the core is always checked).
        #[arg(long, value_name = "NAME")]
        variant: Option<String>,
        /// Print diagnostics and the summary only.
        #[arg(long)]
        quiet: bool,
    },
    /// Write the model files of one variant in canonical form.
    Generate {
        manifest: PathBuf,
        variant: String,
        out: PathBuf,
        /// Write even if the variant has error diagnostics.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        quiet: bool,
    },
    /// Run all three strategies and compare check counts and diagnostics.
    Compare {
        manifest: PathBuf,
        /// Write the comparison as CSV to PATH.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[arg(long, value_name = "NAME")]
        variant: Option<String>,
        #[arg(long)]
        quiet: bool,
    },
}

/// Fatal outcome of a command, with the exit status to report.
struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_FAILURE, msg.into())
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_FAILURE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    let impact = match &cli.impact_override {
        Some(path) => impact_override(path)?,
        None => ImpactTable::standard(),
    };
    let checker = Checker::new(impact);
    match cli.command {
        Command::Check {
            manifest,
            strategy,
            json,
            variant,
            quiet,
        } => {
            let strategy: Strategy = strategy.parse().expect("restricted by clap");
            let line = load(&manifest, variant.as_deref())?;
            let reports = checker.check_product_line(&line, strategy).map_err(check_failure)?;
            emit(out, &render_text(&reports, quiet))?;
            if let Some(path) = json {
                write_file(&path, &JsonReport::new(strategy, &reports).to_json())?;
            }
            Ok(status(&reports))
        }
        Command::Generate {
            manifest,
            variant,
            out: dir,
            force,
            quiet,
        } => generate(&checker, &manifest, &variant, &dir, force, quiet, out),
        Command::Compare {
            manifest,
            csv,
            variant,
            quiet,
        } => {
            let line = load(&manifest, variant.as_deref())?;
            let rows = checker.compare(&line).map_err(check_failure)?;
            if !quiet {
                emit(out, &comparison_table(&rows))?;
            }
            if let Some(path) = csv {
                write_file(&path, &comparison_csv(&rows))?;
            }
            let disagree: Vec<&str> = rows.iter().filter(|r| !r.diagnostics_equal()).map(|r| r.variant()).collect();
            if !disagree.is_empty() {
                return Err(Failure(
                    EXIT_DISAGREEMENT,
                    format!("strategies disagree on the diagnostics of {}", disagree.join(", ")),
                ));
            }
            let product: Vec<CheckReport> = rows.iter().map(|r| r.report(Strategy::Product).clone()).collect();
            let (errors, warnings) = totals(&product);
            emit(out, &format!("{errors} errors, {warnings} warnings\n"))?;
            Ok(status(&product))
        }
    }
}

fn status(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(|r| r.errors() > 0) {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    }
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::UnknownDelta { .. } => usage(e.to_string()),
        CheckError::Application { .. } => Failure(EXIT_INCONSISTENT, e.to_string()),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write output: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Loads the manifest, keeping only `variant` if one is named.
fn load(manifest: &Path, variant: Option<&str>) -> Result<ProductLine, Failure> {
    let mut line = load_product_line(manifest).map_err(|e| usage(e.to_string()))?;
    if let Some(name) = variant {
        line.variants.retain(|v| v.name == name);
        if line.variants.is_empty() {
            return Err(usage(format!("unknown variant `{name}` in {}", manifest.display())));
        }
    }
    Ok(line)
}

fn impact_override(path: &Path) -> Result<ImpactTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let entries: BTreeMap<String, Vec<String>> =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut table = ImpactTable::standard();
    for (op, rules) in entries {
        let kind = OperationKind::all()
            .find(|k| k.to_string() == op)
            .ok_or_else(|| usage(format!("{}: unknown operation `{op}`", path.display())))?;
        let rules = rules
            .iter()
            .map(|r| r.parse::<RuleId>().map_err(|_| usage(format!("{}: unknown rule `{r}`", path.display()))))
            .collect::<Result<BTreeSet<_>, _>>()?;
        table.set(kind, rules);
    }
    Ok(table)
}

fn generate(
    checker: &Checker,
    manifest: &Path,
    variant: &str,
    dir: &Path,
    force: bool,
    quiet: bool,
    out: &mut dyn Write,
) -> Outcome {
    let line = load(manifest, Some(variant))?;
    let spec = &line.variants[0];
    let deltas = line.resolve(spec).map_err(check_failure)?;
    let (report, baseline) = checker
        .check_variant_product(&line.core, &spec.name, &deltas)
        .map_err(check_failure)?;
    emit(out, &render_text(std::slice::from_ref(&report), quiet))?;
    if report.errors() > 0 && !force {
        return Err(Failure(
            EXIT_INCONSISTENT,
            format!("variant `{variant}` has error diagnostics; nothing written (use --force to write anyway)"),
        ));
    }
    let files = write_variant(&baseline.models, variant, dir)?;
    if !quiet {
        emit(out, &format!("wrote {} files to {}\n", files, dir.display()))?;
    }
    Ok(status(std::slice::from_ref(&report)))
}

/// File name and canonical text of every model, plus a `manifest.pl` listing them.
pub fn variant_files(models: &ModelSet, name: &str) -> Vec<(String, String)> {
    let mut files = Vec::new();
    for m in models.workflows.values() {
        files.push((format!("{}.wf", m.name), serialize_model(&Model::Workflow(m.clone()))));
    }
    for m in models.architectures.values() {
        files.push((format!("{}.arch", m.name), serialize_model(&Model::Architecture(m.clone()))));
    }
    for m in models.statecharts.values() {
        files.push((format!("{}.sc", m.name), serialize_model(&Model::StateChart(m.clone()))));
    }
    // A core without a mapping file has an anonymous empty mapping; a
    // mapping built by deltas alone is named after the variant.
    let mut mapping = models.mapping.clone();
    let empty = mapping.task_maps.is_empty() && mapping.behavior_maps.is_empty();
    if !(mapping.name.is_empty() && empty) {
        if mapping.name.is_empty() {
            mapping.name = name.to_string();
        }
        files.push(("mapping.map".into(), serialize_model(&Model::Mapping(mapping))));
    }
    let mut manifest = Manifest::new(name);
    manifest.core_files = files.iter().map(|(f, _)| f.clone()).collect();
    files.push(("manifest.pl".into(), serialize_manifest(&manifest)));
    files
}

fn write_variant(models: &ModelSet, name: &str, dir: &Path) -> Result<usize, Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let files = variant_files(models, name);
    for (file, text) in &files {
        write_file(&dir.join(file), text)?;
    }
    Ok(files.len())
}
