use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fresco_core::case::{analyze_file, RunOptions, DEFAULT_TRUNCATION};
use fresco_core::cli::{cmd_bpoly, cmd_xi, exit_code, EXIT_CHECK_FAILED, EXIT_PIPELINE, EXIT_VALIDATION};
use fresco_core::reproduce::{render_table, run_checks};

#[derive(Parser)]
#[command(name = "fresco", version, about = "Annihilators and Bernstein polynomials of frescos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Bernstein polynomial of a homogeneous operator such as "(a-3b)(a-2b)(a-b)"
    Bpoly { expr: String },
    /// Apply an operator to a target such as "s^1*Log^2"
    Xi {
        expr: String,
        target: String,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Run the full pipeline on a case file
    Analyze {
        file: PathBuf,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// A nonzero rational, or "symbolic"
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in check corpus
    Reproduce {
        #[arg(long)]
        filter: Option<String>,
    },
}

fn fail(code: i32, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Bpoly { expr } => match cmd_bpoly(&expr) {
            Ok(out) => {
                if let Some(note) = out.note {
                    eprintln!("note: {note}");
                }
                println!("{}", out.rendered);
                ExitCode::SUCCESS
            }
            Err(e) => fail(EXIT_VALIDATION, e),
        },
        Command::Xi { expr, target, truncation } => match cmd_xi(&expr, &target, truncation) {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(EXIT_VALIDATION, e),
        },
        Command::Analyze { file, truncation, format, lambda, out } => {
            let options = RunOptions { truncation, lambda };
            let report = match analyze_file(&file, &options) {
                Ok(r) => r,
                Err(e) => return fail(exit_code(&e), e),
            };
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        return fail(EXIT_PIPELINE, format!("{}: {e}", path.display()));
                    }
                }
                None => print!("{text}"),
            }
            match &report.error {
                Some(e) => fail(EXIT_PIPELINE, format!("{}: {}", e.stage, e.message)),
                None => ExitCode::SUCCESS,
            }
        }
        Command::Reproduce { filter } => {
            let results = run_checks(filter.as_deref());
            print!("{}", render_table(&results));
            if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED as u8)
            }
        }
    }
}
