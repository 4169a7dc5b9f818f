use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polyode_cli::output::Format;
use polyode_cli::problem::{apply_overrides, parse_problem, Overrides, Problem};
use polyode_cli::run::{self, RunResult};

#[derive(Parser)]
#[command(
    name = "polyode",
    about = "Polynomial solutions of linear ODEs with polynomial coefficients",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum NormalizeArg {
    Monic,
    Primitive,
}

#[derive(Debug, Clone, Copy)]
struct DegreeRange(usize, usize);

fn parse_degree_range(text: &str) -> Result<DegreeRange, String> {
    let Some((lo, hi)) = text.split_once("..") else {
        return Err("expected <lo>..<hi>".to_string());
    };
    let lo: usize = lo.trim().parse().map_err(|_| "bad lower bound".to_string())?;
    let hi: usize = hi.trim().parse().map_err(|_| "bad upper bound".to_string())?;
    if lo > hi {
        return Err("empty degree range".to_string());
    }
    Ok(DegreeRange(lo, hi))
}

#[derive(Args)]
struct Shared {
    /// Problem file
    file: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Working precision in decimal digits
    #[arg(long)]
    precision: Option<u32>,
    /// Solution normalization
    #[arg(long, value_enum)]
    normalize: Option<NormalizeArg>,
    /// Target degree (overrides the file)
    #[arg(long)]
    degree: Option<usize>,
    /// Degree range <lo>..<hi> (overrides the file)
    #[arg(long, value_parser = parse_degree_range)]
    degrees: Option<DegreeRange>,
    /// Comma-separated unknowns; replaces the file's list and unbinds them
    #[arg(long, value_delimiter = ',')]
    unknowns: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank test: does a solution of the target degree exist?
    Exists(Shared),
    /// Compute the polynomial solutions of the target degree
    Solve(Shared),
    /// Find all polynomial solutions with degree in a range
    Scan(Shared),
    /// Determine unknown coefficients so a solution of the target degree exists
    Params(Shared),
    /// Check a claimed solution against the equation
    Verify {
        #[command(flatten)]
        shared: Shared,
        /// The claimed solution, in the expression grammar
        #[arg(long)]
        solution: String,
    },
}

fn load(shared: &Shared) -> Result<Problem, String> {
    let text = std::fs::read_to_string(&shared.file)
        .map_err(|e| format!("{}: {e}", shared.file.display()))?;
    let mut problem = parse_problem(&text).map_err(|e| e.to_string())?;
    let over = Overrides {
        degree: shared.degree,
        degrees: shared.degrees.map(|DegreeRange(lo, hi)| (lo, hi)),
        precision: shared.precision,
        normalize: shared.normalize.map(|m| match m {
            NormalizeArg::Monic => polyode_core::solver::Normalization::Monic,
            NormalizeArg::Primitive => polyode_core::solver::Normalization::Primitive,
        }),
        unknowns: shared.unknowns.clone(),
    };
    apply_overrides(&mut problem, &over)?;
    Ok(problem)
}

fn dispatch(command: &Command) -> RunResult {
    let shared = match command {
        Command::Exists(s)
        | Command::Solve(s)
        | Command::Scan(s)
        | Command::Params(s) => s,
        Command::Verify { shared, .. } => shared,
    };
    let problem = match load(shared) {
        Ok(p) => p,
        Err(message) => {
            return RunResult {
                exit: 2,
                out: String::new(),
                err: Some(message),
            }
        }
    };
    match command {
        Command::Exists(s) => run::cmd_exists(&problem, s.format),
        Command::Solve(s) => run::cmd_solve(&problem, s.format),
        Command::Scan(s) => run::cmd_scan(&problem, s.format),
        Command::Params(s) => run::cmd_params(&problem, s.format),
        Command::Verify { shared, solution } => {
            run::cmd_verify(&problem, solution, shared.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli.command);
    if !result.out.is_empty() {
        print!("{}", result.out);
    }
    if let Some(message) = result.err {
        eprintln!("error: {message}");
    }
    ExitCode::from(result.exit as u8)
}
