use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use pcentral::milnor::FieldAdapter;
use pcentral::report::{analyze_with, fixture_reports, milnor_report, reports_to_json};
use pcentral::verifier::{ClosureOptions, DEFAULT_MAX_CANDIDATES};
use pcentral::Error;

#[derive(Parser)]
#[command(
    name = "pcentral",
    version,
    about = "Lower p-central series of pro-p presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a presentation given as JSON.
    Analyze {
        file: PathBuf,
        /// Override the truncation degree N from the file.
        #[arg(long)]
        truncation: Option<usize>,
        /// Cap on closure candidates processed per subgroup.
        #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATES)]
        max_candidates: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Milnor K-theory mod p of a finite field, e.g. `Fq:7`.
    Milnor {
        field: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Analyze every built-in fixture.
    Fixtures {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::ResourceCap { .. } | Error::FieldTooLarge { .. }) => 3,
        Some(Error::NoRootOfUnity { .. }) => 4,
        Some(
            Error::Syntax { .. }
            | Error::NonPrimeP(_)
            | Error::TruncationTooSmall(_)
            | Error::NoGenerators
            | Error::UnknownGenerator { .. }
            | Error::GeneratorOutOfRange { .. }
            | Error::IdentityRelator { .. }
            | Error::ModulusTooLarge { .. }
            | Error::BadFieldDescriptor(_)
            | Error::ZeroMilnorDegree,
        ) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<String> {
    match cli.command {
        Command::Analyze {
            file,
            truncation,
            max_candidates,
            format,
        } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let mut pr = pcentral::parse(&text)?;
            if let Some(n) = truncation {
                pr = pr.with_truncation(n)?;
            }
            let report = analyze_with(None, &pr, ClosureOptions { max_candidates })?;
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            })
        }
        Command::Milnor {
            field,
            p,
            n,
            format,
        } => {
            let adapter = FieldAdapter::from_descriptor(&field, p)?;
            let report = milnor_report(&adapter, n)?;
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            })
        }
        Command::Fixtures { format } => {
            let reports = fixture_reports()?;
            Ok(match format {
                Format::Json => reports_to_json(&reports),
                Format::Text => reports
                    .iter()
                    .map(|r| r.to_text())
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
