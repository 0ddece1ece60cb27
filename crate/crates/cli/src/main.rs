use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod config;
mod run;

use config::CliError;

/// Power-series solver for nonlinear PDEs.
#[derive(Parser, Debug)]
#[command(name = "pssm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand and solve a problem; exit 2 if equations stay unresolved.
    Solve(Common),
    /// Check a candidate solution against the matched system.
    Verify {
        #[command(flatten)]
        common: Common,
        /// JSON file with `values` or `assignments`.
        #[arg(long)]
        candidate: PathBuf,
        /// Take unknowns missing from the candidate from the solver.
        #[arg(long)]
        complete: bool,
    },
    /// Evaluate the solved series on a grid, as CSV.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Grid per variable, `name=start:stop:step`.
        #[arg(long = "var", required = true)]
        vars: Vec<String>,
        /// Unknown function to evaluate; defaults to the first.
        #[arg(long)]
        function: Option<String>,
        #[arg(long, value_enum)]
        oracle: Option<OracleKind>,
        #[arg(long, value_enum, default_value_t = PrecisionArg::Float)]
        precision: PrecisionArg,
    },
    /// Substitute the solution back into every equation.
    Residual {
        #[command(flatten)]
        common: Common,
        /// Check this candidate instead of the solver result.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Print the matched algebraic system.
    ExportSystem(Common),
    /// List the built-in problems.
    List {
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in problem name.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub problem: Option<String>,
    /// Problem file in the `.pde` format.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Resize total-degree and parity ansatzes to this degree.
    #[arg(long)]
    pub order: Option<u32>,
    /// Bindings `name=value,...`; values are numbers or expressions.
    #[arg(long = "set")]
    pub set: Vec<String>,
    /// `quadratic=on|off,branches=N,roots=both|principal,generic=on|off`.
    #[arg(long)]
    pub policy: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Tan,
    Sech,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionArg {
    Exact,
    Float,
}

/// What a command produced and the exit status it asks for.
pub struct Outcome {
    pub text: String,
    pub partial: bool,
}

fn execute(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    Ok(match cli.command {
        Command::Solve(c) => (run::solve(&c)?, c.out),
        Command::Verify {
            common,
            candidate,
            complete,
        } => (run::verify(&common, &candidate, complete)?, common.out),
        Command::Eval {
            common,
            vars,
            function,
            oracle,
            precision,
        } => (
            run::eval(&common, &vars, function.as_deref(), oracle, precision)?,
            common.out,
        ),
        Command::Residual { common, candidate } => {
            (run::residual(&common, candidate.as_deref())?, common.out)
        }
        Command::ExportSystem(c) => (run::export_system(&c)?, c.out),
        Command::List { format, out } => (run::list(format.unwrap_or(Format::Text))?, out),
    })
}

fn report_error(e: &CliError) {
    let color = std::env::var("PSSM_COLOR").is_ok_and(|v| v == "1");
    let label = if color { "\x1b[31merror\x1b[0m" } else { "error" };
    eprintln!("{label}: {e}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok((outcome, out)) => {
            let written = match out {
                Some(path) => std::fs::write(&path, &outcome.text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None => std::io::stdout()
                    .write_all(outcome.text.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string())),
            };
            if let Err(e) = written {
                report_error(&e);
                return ExitCode::from(1);
            }
            if outcome.partial {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            report_error(&e);
            ExitCode::from(1)
        }
    }
}
