//! Command-line front end: validates model catalogs, scores response files,
//! and renders assessment, agreement, gap, and radar-chart reports.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgmm_core::agreement::agreement_by_level;
use dgmm_core::analytics::{activity_profile, dimension_profile, gap_to_level};
use dgmm_core::error::Error;
use dgmm_core::model::{MaturityModel, ModelError};
use dgmm_core::rating::determine_maturity;
use dgmm_core::report;
use dgmm_core::svg::RadarChart;
use dgmm_core::{AggregationPolicy, ResponseSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dgmm",
    version,
    about = "Maturity assessment for game development processes",
    long_about = "Scores multi-respondent questionnaire responses against a maturity-model \
                  catalog (the Digital Game Maturity Model ships bundled), determines the \
                  achieved maturity level, and reports agreement statistics, gap analyses, \
                  and radar profiles."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model catalog against its structural invariants
    Validate {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Score responses and emit the full assessment report
    Assess {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        responses: ResponsesArg,
        #[arg(long, value_enum, default_value_t = Aggregation::MedianLow)]
        aggregation: Aggregation,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write output here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inter-rater agreement statistics per maturity level
    Agreement {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        responses: ResponsesArg,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Failing statements and shortfall blocking a target level
    Gap {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        responses: ResponsesArg,
        /// Target level; defaults to the lowest level that did not pass
        #[arg(long)]
        level: Option<u8>,
        #[arg(long, value_enum, default_value_t = Aggregation::MedianLow)]
        aggregation: Aggregation,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radar-chart SVG of a dimension or activity profile
    Chart {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        responses: ResponsesArg,
        /// Level for the dimension profile; defaults to the achieved level
        /// (or 1 when none passed)
        #[arg(long)]
        level: Option<u8>,
        /// Chart one dimension's activities across all levels instead
        #[arg(long)]
        dimension: Option<u8>,
        /// Aggregation for the plotted averages
        #[arg(long, value_enum, default_value_t = Aggregation::Mean)]
        aggregation: Aggregation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArg {
    /// Model catalog JSON; defaults to $DGMM_MODEL, then the bundled model
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct ResponsesArg {
    /// Responses file: .csv (tabular) or .json (structured)
    #[arg(long)]
    responses: PathBuf,
    /// Organization label for CSV inputs (JSON carries its own)
    #[arg(long)]
    organization: Option<String>,
    /// Highest assessed level for CSV inputs (JSON carries its own)
    #[arg(long)]
    max_level: Option<u8>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Aggregation {
    MedianLow,
    Mean,
}

impl From<Aggregation> for AggregationPolicy {
    fn from(a: Aggregation) -> AggregationPolicy {
        match a {
            Aggregation::MedianLow => AggregationPolicy::MedianLow,
            Aggregation::Mean => AggregationPolicy::Mean,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Md,
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("cannot read {}", path.display()),
        source,
    })
}

fn load_model(arg: &ModelArg) -> Result<MaturityModel, Error> {
    let path = arg
        .model
        .clone()
        .or_else(|| std::env::var_os("DGMM_MODEL").map(PathBuf::from));
    match path {
        Some(path) => Ok(MaturityModel::from_json_str(&read_file(&path)?)?),
        None => Ok(MaturityModel::builtin().clone()),
    }
}

fn load_responses(arg: &ResponsesArg, model: &MaturityModel) -> Result<ResponseSet, Error> {
    let data = read_file(&arg.responses)?;
    let organization = arg.organization.clone().unwrap_or_else(|| {
        arg.responses
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "unnamed".to_string())
    });
    let looks_json = matches!(
        arg.responses.extension().and_then(|e| e.to_str()),
        Some("json")
    ) || data.trim_start().starts_with('{');
    let set = if looks_json {
        ResponseSet::parse_json(&data, model)?
    } else {
        ResponseSet::parse_csv(&data, model, &organization, arg.max_level)?
    };
    Ok(set)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            context: format!("cannot write {}", path.display()),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { model } => {
            // report all violations, not just the first
            let path = model
                .model
                .clone()
                .or_else(|| std::env::var_os("DGMM_MODEL").map(PathBuf::from));
            let loaded = match path {
                Some(path) => MaturityModel::from_json_str(&read_file(&path)?),
                None => Ok(MaturityModel::builtin().clone()),
            };
            match loaded {
                Ok(model) => {
                    println!(
                        "ok: {} ({} levels, {} activities, {} statements)",
                        model.name,
                        model.levels.len(),
                        model.activities.len(),
                        model.statements.len()
                    );
                    Ok(())
                }
                Err(ModelError::Invalid(violations)) => {
                    for violation in &violations {
                        eprintln!("violation: {violation}");
                    }
                    Err(ModelError::Invalid(violations).into())
                }
                Err(other) => Err(other.into()),
            }
        }
        Command::Assess {
            model,
            responses,
            aggregation,
            format,
            out,
        } => {
            let model = load_model(&model)?;
            let set = load_responses(&responses, &model)?;
            let bundle = report::assemble(&set, &model, aggregation.into())?;
            let text = match format {
                Format::Json => report::render_json(&bundle),
                Format::Md => report::render_markdown(&bundle),
            };
            emit(&text, out.as_deref())?;
            if matches!(format, Format::Json) && out.is_some() {
                println!(
                    "Maturity level: {}",
                    report::maturity_label(&bundle)
                );
            }
            Ok(())
        }
        Command::Agreement {
            model,
            responses,
            format,
            out,
        } => {
            let model = load_model(&model)?;
            let set = load_responses(&responses, &model)?;
            let reports = agreement_by_level(&set, &model)?;
            let text = match format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&reports).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Md => agreement_markdown(&model, &set, &reports),
            };
            emit(&text, out.as_deref())
        }
        Command::Gap {
            model,
            responses,
            level,
            aggregation,
            format,
            out,
        } => {
            let model = load_model(&model)?;
            let set = load_responses(&responses, &model)?;
            let policy: AggregationPolicy = aggregation.into();
            let target = match level {
                Some(level) => level,
                None => {
                    let maturity = determine_maturity(&set, &model, policy)?;
                    maturity
                        .level_scores
                        .iter()
                        .find(|s| !s.passed)
                        .map(|s| s.level)
                        .unwrap_or(maturity.determination_bound)
                }
            };
            let gap = gap_to_level(target, &set, &model, policy)?;
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&gap).expect("gap serializes");
                    s.push('\n');
                    s
                }
                Format::Md => gap_markdown(&model, &gap),
            };
            emit(&text, out.as_deref())
        }
        Command::Chart {
            model,
            responses,
            level,
            dimension,
            aggregation,
            out,
        } => {
            let model = load_model(&model)?;
            let set = load_responses(&responses, &model)?;
            let policy: AggregationPolicy = aggregation.into();
            let chart = match dimension {
                Some(dimension_id) => {
                    let profile = activity_profile(dimension_id, &set, &model, policy)?;
                    RadarChart::from_activity_profile(&profile)
                }
                None => {
                    let target = match level {
                        Some(level) => level,
                        None => determine_maturity(&set, &model, policy)?.gml.max(1),
                    };
                    let profile = dimension_profile(target, &set, &model, policy)?;
                    RadarChart::from_dimension_profile(&profile)
                }
            };
            emit(&chart.render(), out.as_deref())
        }
    }
}

fn agreement_markdown(
    model: &MaturityModel,
    set: &ResponseSet,
    reports: &[dgmm_core::agreement::AgreementReport],
) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# Inter-rater agreement: {} ({} respondents)",
        set.organization(),
        set.respondents().len()
    );
    out.push('\n');
    out.push_str(&report::render_agreement_table(reports, |ordinal| {
        model
            .level_name(ordinal)
            .unwrap_or("?")
            .to_string()
    }));
    out.push_str("Item count per level is the level's full statement count.\n");
    out
}

fn gap_markdown(model: &MaturityModel, gap: &dgmm_core::analytics::GapReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let name = model.level_name(gap.target_level).unwrap_or("?");
    let _ = writeln!(out, "# Gap to level {} ({})", gap.target_level, name);
    out.push('\n');
    let _ = writeln!(
        out,
        "Applicable {} of {}, threshold {}, shortfall {}.",
        gap.applicable_count, gap.total_statements, gap.passing_threshold, gap.shortfall
    );
    out.push('\n');
    if gap.failing_statements.is_empty() {
        out.push_str("No failing statements.\n");
    } else {
        out.push_str("| Statement | Aggregate rating |\n|---|---|\n");
        for failing in &gap.failing_statements {
            let _ = writeln!(out, "| {} | {:.2} |", failing.id, failing.aggregate.to_f64());
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
