//! Command-line front end for `magic4`.
//!
//! Every subcommand renders its whole output into memory first and writes it
//! in one piece once the computation has finished.

pub mod commands;
pub mod document;
pub mod error;
pub mod verify;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "magic4",
    version,
    about = "Order-4 additive and multiplicative magic squares"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Filter {
    #[default]
    All,
    Compatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Representative {
    #[default]
    Full,
    D8Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToAdditive,
    ToMultiplicative,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write records to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file with one or more squares (text or JSON); `-` or absent
    /// reads standard input.
    pub input: Option<PathBuf>,
    /// Prime basis for multiplicative squares, e.g. `2,3,5,67`.
    #[arg(long)]
    pub primes: Option<String>,
    /// Additive entries are 1..=16 rather than 0..=15.
    #[arg(long)]
    pub one_based: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List normal additive magic squares.
    Enumerate {
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
        #[arg(long, value_enum, default_value_t = Representative::Full)]
        representative: Representative,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Report magic, normal and compatible flags, class and bit planes.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Convert between multiplicative squares and their additive images.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        direction: Direction,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit normal squares of one class with their decompositions.
    Construct {
        /// Class label such as `(C,C,D,D)`.
        #[arg(long = "class")]
        class: String,
        /// Number of squares, or `all`.
        #[arg(long, default_value = "all")]
        count: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit multiplicative squares over these primes.
        #[arg(long)]
        primes: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Count compatible squares per class.
    Census {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the full suite of counting and construction checks.
    Verify,
}

/// Runs one parsed command. `stdout` receives reports and records not sent
/// to a file; `stderr` receives summaries when records go to standard output.
pub fn run(
    cli: Cli,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match cli.command {
        Command::Enumerate {
            filter,
            representative,
            out,
        } => commands::enumerate(filter, representative, &out, stdout, stderr),
        Command::Classify { input, format } => commands::classify(&input, format, stdin, stdout),
        Command::Convert {
            input,
            direction,
            out,
        } => commands::convert(&input, direction, &out, stdin, stdout),
        Command::Construct {
            class,
            count,
            seed,
            primes,
            out,
        } => commands::construct(&class, &count, seed, primes.as_deref(), &out, stdout),
        Command::Census { out } => commands::census(&out, stdout),
        Command::Verify => verify::run(stdout),
    }
}
