use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use poissonlab::harness::{self, exit, Config, Overrides};

#[derive(Parser)]
#[command(name = "poissonlab", version, about = "Residual checks for Poisson geometry and Lie groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites enabled in a TOML config.
    Run {
        config: PathBuf,
        /// Replaces the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Runs only this suite.
        #[arg(long)]
        suite: Option<String>,
        /// Writes one JSON record per line to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List groups, algebras, structures, instances and suites.
    List,
    /// Describe one catalog entry or suite.
    Describe { name: String },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { exit::CONFIG_ERROR } else { exit::PASS });
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", harness::list_catalog());
            code(exit::PASS)
        }
        Command::Describe { name } => match harness::describe(&name) {
            Ok(text) => {
                print!("{text}");
                code(exit::PASS)
            }
            Err(e) => {
                eprintln!("error: {e}");
                code(exit::CONFIG_ERROR)
            }
        },
        Command::Run { config, seed, suite, json } => {
            let outcome = Config::load(&config).and_then(|c| harness::run(&c, &Overrides { seed, suite }));
            let outcome = match outcome {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code(exit::CONFIG_ERROR);
                }
            };
            print!("{}", outcome.table());
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, outcome.jsonl()) {
                    eprintln!("error: {}: {e}", path.display());
                    return code(exit::CONFIG_ERROR);
                }
            }
            code(outcome.exit_code())
        }
    }
}
