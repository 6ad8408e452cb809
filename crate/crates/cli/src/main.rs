use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relfix::commands::{self, Format, Output, SolveOptions, EXIT_INPUT};
use relfix_core::certifier::Theorem;

/// Coincidence points and common fixed points of mapping pairs on metric
/// spaces with binary relations.
#[derive(Parser)]
#[command(name = "relfix", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide every hypothesis of a theorem and report its conclusion.
    Check {
        /// A JSON instance file or a bundled name (example_5_1, example_5_2).
        file: String,
        /// th1, th2, th3, th4, cor0, cor2, cor5, cor6, cor8, cor9 or cor10.
        #[arg(long)]
        theorem: Option<Theorem>,
    },
    /// Run the Picard-Jungck iteration gw_{n+1} = fw_n.
    Solve {
        file: String,
        /// Starting point (a label, or a number on interval carriers).
        #[arg(long)]
        start: Option<String>,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
        /// Residual tolerance on interval carriers, as p/q.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Brute-force solution sets of a finite instance.
    Oracle { file: String },
    /// Differential testing on seeded random finite instances.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        seeds: u64,
        /// Largest carrier size (2..=8).
        #[arg(long, default_value_t = 8)]
        size: usize,
        /// First seed; overrides RELFIX_SEED.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reports for every theorem the document's condition applies to.
    Report { file: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Check { file, theorem } => commands::check(&file, theorem, cli.format),
        Command::Solve {
            file,
            start,
            max_iter,
            eps,
        } => commands::solve(
            &file,
            &SolveOptions {
                start,
                max_iterations: max_iter,
                epsilon: eps,
            },
            cli.format,
        ),
        Command::Oracle { file } => commands::oracle(&file, cli.format),
        Command::Fuzz { seeds, size, seed } => {
            let env = std::env::var("RELFIX_SEED").ok();
            match commands::resolve_seed(seed, env.as_deref()) {
                Ok(start) => commands::fuzz(seeds, start, size, cli.format),
                Err(e) => Output {
                    text: format!("error: {e}\n"),
                    code: EXIT_INPUT,
                },
            }
        }
        Command::Report { file } => commands::report(&file, cli.format),
    };
    if out.code == EXIT_INPUT {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    ExitCode::from(out.code as u8)
}
