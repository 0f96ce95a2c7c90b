use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod error;
mod instance;
mod render;
mod report;

use commands::{InstanceCmd, Mu2Args, NumericArgs, PointsArgs, RenderArgs, VerifyArgs};
use error::{CliError, CliResult};
use report::CommandReport;

#[derive(Debug, Parser)]
#[command(
    name = "affine-floer",
    version,
    about = "Floer products of Lagrangian sections over singular integral affine bases"
)]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the (1/d)-integral points of a base.
    Points(PointsArgs),
    /// Product of two basis vectors.
    Mu2(Mu2Args),
    /// Run a cross-verification suite.
    Verify(VerifyArgs),
    /// Write an SVG figure of a base, its points and a tropical triangle.
    Render(RenderArgs),
    /// Numerical checks of the fibration coordinates and superpotential.
    Numeric(NumericArgs),
    /// Print a base as a JSON instance file.
    Instance(InstanceCmd),
}

fn run(cli: &Cli) -> CliResult<CommandReport> {
    let exec = if cli.sequential {
        affine_floer::Execution::Sequential
    } else {
        affine_floer::Execution::default()
    };
    match &cli.command {
        Command::Points(a) => commands::points(a),
        Command::Mu2(a) => commands::mu2(a),
        Command::Verify(a) => commands::verify(a, exec),
        Command::Render(a) => commands::render(a),
        Command::Numeric(a) => commands::numeric(a, exec),
        Command::Instance(a) => commands::instance(a),
    }
}

fn emit(cli: &Cli, report: &CommandReport) -> CliResult<()> {
    let json = serde_json::to_string_pretty(report)?;
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{json}\n")).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let mut stdout = std::io::stdout().lock();
    let text = if cli.json {
        format!("{json}\n")
    } else {
        report.to_text()
    };
    // a closed pipe is not an error worth reporting
    let _ = stdout.write_all(text.as_bytes());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| emit(&cli, &r).map(|_| r.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
