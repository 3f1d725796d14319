mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hazcast_core::hazard::IconMode;
use hazcast_core::render::{Format, LayoutCondition};

use commands::{CliError, ErrorKind};

/// Summit forecast parsing, hazard icons, layout rendering and study statistics.
#[derive(Debug, Parser)]
#[command(name = "hazcast", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Directory holding the four scale tables (defaults to the shipped set).
    #[arg(long, value_name = "DIR")]
    tables: Option<PathBuf>,
    /// Lowest Beaufort force that shows a wind icon.
    #[arg(long, value_name = "FORCE", value_parser = clap::value_parser!(u8).range(0..=12))]
    wind_floor: Option<u8>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse raw forecast text into the canonical format.
    Parse {
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// List the hazard icons of a forecast.
    Classify {
        input: PathBuf,
        #[arg(long, default_value = "overall", value_parser = parse_mode)]
        mode: IconMode,
        /// Triad advisory thresholds; the advisory is only printed when given.
        #[arg(long, value_name = "FILE")]
        thresholds: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Render a forecast under one layout condition.
    Render {
        input: PathBuf,
        #[arg(long, value_parser = parse_condition)]
        condition: LayoutCondition,
        #[arg(long, default_value = "html", value_parser = parse_format)]
        format: Format,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Where to write the element-to-field manifest.
        #[arg(long, value_name = "FILE")]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Render a set of forecasts under one condition, with an index.
    Stimuli {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_parser = parse_condition)]
        condition: LayoutCondition,
        #[arg(long, default_value = "html", value_parser = parse_format)]
        format: Format,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Analyze participant responses.
    Stats {
        #[arg(long, value_name = "FILE")]
        responses: PathBuf,
        #[arg(long, value_name = "FILE")]
        participants: PathBuf,
        /// Directory for report.json, report.txt and plot.csv; without it the
        /// text report goes to stdout.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Check scale tables for gaps, overlaps and level order.
    ValidateTables {
        #[arg(long, value_name = "DIR")]
        tables: Option<PathBuf>,
    },
}

fn parse_condition(s: &str) -> Result<LayoutCondition, String> {
    s.parse().map_err(|e: hazcast_core::render::UnknownCondition| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<IconMode, String> {
    s.parse()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Parse { input, out } => commands::parse(&input, out.as_deref()),
        Command::Classify {
            input,
            mode,
            thresholds,
            out,
            engine,
        } => commands::classify(
            &input,
            mode,
            thresholds.as_deref(),
            out.as_deref(),
            &commands::engine(engine.tables.as_deref(), engine.wind_floor)?,
        ),
        Command::Render {
            input,
            condition,
            format,
            out,
            manifest,
            engine,
        } => commands::render(
            &input,
            condition,
            format,
            out.as_deref(),
            manifest.as_deref(),
            &commands::engine(engine.tables.as_deref(), engine.wind_floor)?,
        ),
        Command::Stimuli {
            inputs,
            condition,
            format,
            out,
            engine,
        } => commands::stimuli(
            &inputs,
            condition,
            format,
            &out,
            &commands::engine(engine.tables.as_deref(), engine.wind_floor)?,
        ),
        Command::Stats {
            responses,
            participants,
            out,
        } => commands::stats(&responses, &participants, out.as_deref()),
        Command::ValidateTables { tables } => commands::validate_tables(tables.as_deref()),
    }
}

fn report(err: &CliError) -> ExitCode {
    let tag = match err.kind {
        ErrorKind::Input => "input-error",
        ErrorKind::Internal => "internal-error",
    };
    let message = err.message.split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("hazcast: {tag}: {message}");
    ExitCode::from(err.kind.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            match e.kind() {
                K::DisplayHelp | K::DisplayVersion => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                K::DisplayHelpOnMissingArgumentOrSubcommand => {
                    return report(&CliError::input(
                        "missing subcommand; valid subcommands: parse, classify, render, stimuli, stats, validate-tables",
                    ));
                }
                _ => {}
            }
            let rendered = e.render().to_string();
            let message: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let message = message.join(" ");
            return report(&CliError::input(message.trim_start_matches("error: ")));
        }
    };
    std::panic::set_hook(Box::new(|_| {}));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => report(&e),
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown cause".to_string());
            report(&CliError::internal(format!("invariant violated: {detail}")))
        }
    }
}
