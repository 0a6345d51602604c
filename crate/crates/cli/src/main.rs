//! `qmes`: generate maximally entangled bases, MUB families and line states,
//! and run the verification suites.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for
//! usage errors (bad flags, composite or even d, unknown labels, malformed
//! words, unreadable input).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qmes", version, about = "Maximally entangled qudit states, MUB and phase-space lines")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Absolute tolerance for every pass/fail decision.
    #[arg(long, global = true, env = "QMES_TOL", default_value_t = qmes::DEFAULT_TOL)]
    tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Points {
    /// `|q⟩_c |p;0⟩_r`, the realization whose line states are MUB products.
    Lattice,
    /// `|p;0⟩_c |q⟩_r`; exploratory, rows are reported but never fail.
    Plus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit all d+1 mutually unbiased bases.
    GenMub {
        #[arg(long)]
        d: u64,
    },
    /// Emit the d² maximally entangled basis built from bases b and b'.
    GenMesBasis {
        #[arg(long)]
        d: u64,
        /// `cb` or an integer in 0..d.
        #[arg(long)]
        b: String,
        #[arg(long = "b-prime")]
        b_prime: String,
    },
    /// Run verification suites, or re-verify a basis written by
    /// gen-mes-basis.
    Verify {
        /// Dimensions to check; repeat or comma-separate. Default 3,5,7.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u64>,
        #[arg(long, default_value = "all",
              value_parser = ["all", "mub", "mes", "collective", "lines"])]
        suite: String,
        /// JSON file from gen-mes-basis; replaces the suites.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["d", "suite"])]
        input: Option<PathBuf>,
        /// Seed for the random controls.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include per-check wall time (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Move a lattice point with an operator word, symbolically and with
    /// dense matrices.
    Hop {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        p: i64,
        /// For example `Xc^2 Xr^6`. Empty means identity.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
        /// Apply the word this many times.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
    },
    /// Factor every line state into single-particle MUB states.
    Lines {
        /// Dimensions; repeat or comma-separate. Default 3,5,7.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Points::Lattice)]
        points: Points,
    },
}

/// How a subcommand ended, before mapping to an exit code.
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match cli.command {
        Command::GenMub { d } => commands::gen_mub(c, d),
        Command::GenMesBasis { d, b, b_prime } => commands::gen_mes_basis(c, d, &b, &b_prime),
        Command::Verify { d, suite, input, seed, timings } => match input {
            Some(path) => commands::verify_file(c, &path, timings),
            None => commands::verify(c, &d, &suite, seed, timings),
        },
        Command::Hop { d, q, p, word, steps } => commands::hop(c, d, q, p, &word, steps as usize),
        Command::Lines { d, points } => commands::lines(c, &d, points),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
