//! `matchlab`: generate, check, play and solve matching economies.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchlab::game::{StrategyClass, DEFAULT_BUDGET};
use matchlab::{Error, Rational};

#[derive(Parser)]
#[command(name = "matchlab", version, about = "Two-sided matching with one-sided incomplete information")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Firms,
    Workers,
}

#[derive(Subcommand)]
enum Command {
    /// Write a constructed economy, its profiles and an expectations manifest.
    Gen {
        #[command(subcommand)]
        which: GenCommand,
    },
    /// Run structural checks on an economy file.
    Check(CheckArgs),
    /// Run DA on every state for a profile.
    Play(PlayArgs),
    /// Verify or enumerate Bayesian Nash equilibria.
    Bne {
        #[command(subcommand)]
        which: BneCommand,
    },
    /// Compare the outcomes of two profiles.
    Stats(StatsArgs),
}

#[derive(Args, Clone)]
pub struct GenCommon {
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Probability of state 1, as "p/q".
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    p1: Rational,
}

#[derive(Subcommand)]
pub enum GenCommand {
    /// Three firms, three workers, four equilibrium outcomes.
    Motivating(GenCommon),
    /// A cycle-free n x n market augmented with one firm and one worker.
    Example2 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// An assortative n x n market augmented with k firms and k workers.
    Prop4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Append the three-by-three block to a single-state economy file.
    Append {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
pub struct CheckArgs {
    economy: PathBuf,
    #[arg(long)]
    spc: bool,
    #[arg(long)]
    spc_star: bool,
    #[arg(long)]
    cycles: bool,
    #[arg(long, value_enum)]
    assortative: Option<SideArg>,
    #[arg(long)]
    unique_stable: bool,
    /// Single-state economy file of the original market; agents whose names
    /// are absent from it count as added.
    #[arg(long)]
    augmented: Option<PathBuf>,
}

#[derive(Args)]
pub struct PlayArgs {
    economy: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    /// Only show this state (by id).
    #[arg(long)]
    state: Option<String>,
    #[arg(long, value_enum, default_value_t = SideArg::Firms)]
    proposing: SideArg,
}

#[derive(Subcommand)]
pub enum BneCommand {
    /// Check one profile for profitable deviations.
    Verify {
        economy: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: StrategyClass,
    },
    /// Sweep every profile of a class and group equilibria by outcome.
    Enumerate {
        economy: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: StrategyClass,
        /// Only profiles whose reports list the true top firm first.
        #[arg(long)]
        undominated_only: bool,
        #[arg(long, env = "MATCHLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

#[derive(Args)]
pub struct StatsArgs {
    economy: PathBuf,
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    alt: PathBuf,
    /// Comma-separated worker names (default: all).
    #[arg(long, value_delimiter = ',')]
    workers: Option<Vec<String>>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    matchlab::io::rational_from_str(s).map_err(|e| e.to_string())
}

fn parse_class(s: &str) -> Result<StrategyClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Construction(_) => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { which } => commands::gen(which),
        Command::Check(args) => commands::check(args),
        Command::Play(args) => commands::play(args),
        Command::Bne { which } => commands::bne(which),
        Command::Stats(args) => commands::stats(args),
    };
    match result {
        Ok(output) => {
            match cli.format {
                Format::Text => print!("{}", output.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&output.json).expect("values serialize")
                ),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
