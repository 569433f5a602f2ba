use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use knotfloer::algebra::Coefficients;

mod commands;
mod error;
mod input;
mod report;
mod selftest;

use error::CliError;
use input::DiagramInput;

/// Knot Floer homology of doubly pointed genus one Heegaard diagrams.
///
/// Exit codes: 0 success, 1 self-test failure, 2 invalid input,
/// 3 stabilization or engine failure.
#[derive(Parser)]
#[command(name = "knotfloer", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hat knot Floer homology table, Alexander polynomial, genus bound.
    Hfk {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, value_enum, default_value_t = CoefficientsArg::Mod2)]
        coefficients: CoefficientsArg,
    },
    /// Filtered complex CFK as JSON.
    Complex {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, value_enum, default_value_t = CoefficientsArg::Mod2)]
        coefficients: CoefficientsArg,
    },
    /// HF+ of large integer surgery from region homology.
    Surgery {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Surgery coefficient magnitude.
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        /// Spin^c label.
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Depth of the U-power truncation.
        #[arg(long)]
        truncation: Option<u64>,
    },
    /// Ranks for fibered three-manifold models.
    Fibered {
        /// One of sigma_s1, dehn_twist, x_module, macdonald.
        #[arg(long)]
        model: String,
        #[arg(long)]
        g: u32,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "d")]
        k: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        d: Option<i64>,
    },
    /// List built-in diagrams.
    Builtins,
    /// Run the acceptance checks.
    Selftest {
        /// Only run checks whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Load diagrams from `<name>.json` files in this directory.
        #[arg(long)]
        diagram_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DiagramArgs {
    /// Built-in diagram name.
    #[arg(long)]
    builtin: Option<String>,
    /// Diagram JSON file, or `-` for standard input.
    path: Option<PathBuf>,
}

impl DiagramArgs {
    fn load(&self) -> Result<DiagramInput, CliError> {
        match (&self.builtin, &self.path) {
            (Some(name), _) => DiagramInput::builtin(name),
            (None, Some(path)) => DiagramInput::file(path),
            (None, None) => Err(CliError::Input("a diagram path or --builtin is required".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CoefficientsArg {
    Mod2,
    Int,
}

impl From<CoefficientsArg> for Coefficients {
    fn from(c: CoefficientsArg) -> Self {
        match c {
            CoefficientsArg::Mod2 => Coefficients::Mod2,
            CoefficientsArg::Int => Coefficients::Integer,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Neg,
    Pos,
}

fn run(cli: Cli) -> Result<report::Report, CliError> {
    match cli.command {
        Command::Hfk { diagram, coefficients } => commands::hfk(&diagram.load()?, coefficients.into()),
        Command::Complex { diagram, coefficients } => commands::complex(&diagram.load()?, coefficients.into()),
        Command::Surgery {
            diagram,
            p,
            m,
            side,
            truncation,
        } => commands::surgery(&diagram.load()?, p, m, matches!(side, SideArg::Neg), truncation),
        Command::Fibered { model, g, k, d } => commands::fibered(&model, g, k, d),
        Command::Builtins => Ok(commands::list_builtins()),
        Command::Selftest { filter, diagram_dir } => selftest::run(filter.as_deref(), diagram_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    panic::set_hook(Box::new(|info| eprintln!("error: internal failure: {info}")));
    let outcome = panic::catch_unwind(|| run(cli)).unwrap_or_else(|_| Err(CliError::Engine("aborted".into())));
    match outcome {
        Ok(report) => {
            report.print(json);
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
