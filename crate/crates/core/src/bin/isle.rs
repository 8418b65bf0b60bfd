use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use isle::cli::{self, CliError, Overrides};

/// Island-model parallel global optimization.
#[derive(Parser)]
#[command(name = "isle", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Synchronize islands at every iteration (reproducible runs).
        #[arg(long)]
        lockstep: bool,
        /// Master seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, overriding the config and $ISLE_OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the config and print it normalized, without running.
        #[arg(long)]
        validate: bool,
    },
    /// List registered problems, algorithms or topologies.
    List { kind: String },
    /// Write tab-separated plot data (convergence, archive or topology) next to a results file.
    Export { results: PathBuf, what: String },
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("isle: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            config,
            lockstep,
            seed,
            out,
            validate,
        } => {
            let overrides = Overrides { seed, lockstep, out };
            if validate {
                print!("{}", cli::validate(&config, &overrides)?);
                return Ok(());
            }
            let (dir, results) = cli::run(&config, &overrides)?;
            println!(
                "best f = {} after {} evaluations; results in {}",
                results.best.f,
                results.total_evaluations,
                dir.display()
            );
        }
        Command::List { kind } => print!("{}", cli::list(&kind)?),
        Command::Export { results, what } => println!("{}", cli::export(&results, &what)?.display()),
    }
    Ok(())
}
